// Copyright 2026 The PII Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bundled word lists for the synthetic corpus.

#include "piiaudit/corpus.hpp"

namespace piiaudit::corpus {

const std::vector<WeightedLabel>& DefaultSymptoms() {
  // Mildly skewed: a few complaints are common, most are rare.
  static const std::vector<WeightedLabel> kSymptoms = {
      {"abdominal pain", 2.0}, {"joint pain", 2.0}, {"back pain", 2.0}, {"headache", 2.0},
      {"chest pain", 2.0}, {"acid reflux", 2.0}, {"high blood pressure", 2.0}, {"anxiety", 2.0},
      {"migraine", 2.0}, {"asthma", 2.0}, {"BPPV", 1.5}, {"diabetes", 1.5}, {"insomnia", 1.5},
      {"depression", 1.5}, {"eczema", 1.5}, {"sinusitis", 1.5}, {"gastritis", 1.5},
      {"kidney stones", 1.5}, {"vertigo", 1.5}, {"tinnitus", 1.5}, {"psoriasis", 1.5},
      {"acne", 1.5}, {"tonsillitis", 1.5}, {"bronchitis", 1.5}, {"pneumonia", 1.5},
      {"constipation", 1.5}, {"diarrhea", 1.5}, {"gallstones", 1.5}, {"anemia", 1.5},
      {"hypothyroidism", 1.5}, {"conjunctivitis", 1.0}, {"sciatica", 1.0}, {"arthritis", 1.0},
      {"gout", 1.0}, {"shingles", 1.0}, {"urinary infection", 1.0}, {"ear infection", 1.0},
      {"food allergy", 1.0}, {"hay fever", 1.0}, {"hair loss", 1.0}, {"neck pain", 1.0},
      {"knee pain", 1.0}, {"heart palpitations", 1.0}, {"panic attacks", 1.0}, {"fatty liver", 1.0},
      {"ovarian cyst", 1.0}, {"piles", 1.0}, {"plantar fasciitis", 1.0}, {"hyperthyroidism", 1.0},
      {"chickenpox", 1.0}, {"measles", 1.0}, {"mumps", 1.0}, {"dengue fever", 1.0},
      {"malaria", 1.0}, {"typhoid", 1.0}, {"jaundice", 1.0}, {"hepatitis B", 1.0},
      {"cirrhosis", 1.0}, {"pancreatitis", 1.0}, {"appendicitis", 1.0}, {"hernia", 1.0},
      {"ulcerative colitis", 1.0}, {"Crohn's disease", 1.0}, {"celiac disease", 1.0},
      {"lactose intolerance", 1.0}, {"irritable bowel", 1.0}, {"peptic ulcer", 1.0},
      {"hemorrhoids", 1.0}, {"varicose veins", 1.0}, {"deep vein thrombosis", 1.0}, {"angina", 1.0},
      {"heart murmur", 1.0}, {"arrhythmia", 1.0}, {"low blood pressure", 1.0},
      {"high cholesterol", 1.0}, {"obesity", 1.0}, {"sleep apnea", 1.0}, {"restless legs", 1.0},
      {"epilepsy", 1.0}, {"Parkinson's disease", 1.0}, {"multiple sclerosis", 1.0},
      {"Bell's palsy", 1.0}, {"carpal tunnel", 1.0}, {"tennis elbow", 1.0},
      {"frozen shoulder", 1.0}, {"osteoporosis", 1.0}, {"scoliosis", 1.0}, {"lupus", 1.0},
      {"rosacea", 1.0}, {"ringworm", 1.0}, {"scabies", 1.0}, {"warts", 1.0}, {"dandruff", 1.0},
      {"cataract", 1.0}, {"glaucoma", 1.0}, {"dry eye", 1.0}, {"otitis media", 1.0},
      {"laryngitis", 1.0}, {"strep throat", 1.0}, {"COPD", 1.0},
  };
  return kSymptoms;
}

const std::vector<std::string>& DefaultFirstNames() {
  static const std::vector<std::string> kFirst = {
      "James",   "Mary",     "Robert",  "Patricia", "John",     "Jennifer", "Michael",
      "Linda",   "David",    "Elizabeth", "William", "Barbara", "Richard",  "Susan",
      "Joseph",  "Jessica",  "Thomas",  "Sarah",    "Charles",  "Karen",    "Christopher",
      "Lisa",    "Daniel",   "Nancy",   "Matthew",  "Betty",    "Anthony",  "Sandra",
      "Mark",    "Margaret", "Donald",  "Ashley",   "Steven",   "Kimberly", "Andrew",
      "Emily",   "Paul",     "Donna",   "Joshua",   "Michelle", "Kenneth",  "Carol",
      "Kevin",   "Amanda",   "Brian",   "Melissa",  "George",   "Deborah",  "Timothy",
      "Stephanie", "Ronald", "Dorothy", "Jason",    "Rebecca",  "Edward",   "Sharon",
      "Jeffrey", "Laura",    "Ryan",    "Cynthia",  "Jacob",    "Amy",      "Gary",
      "Kathleen", "Nicholas", "Angela", "Eric",     "Shirley",  "Jonathan", "Brenda",
      "Stephen", "Emma",     "Larry",   "Anna",     "Justin",   "Pamela",   "Scott",
      "Nicole",  "Brandon",  "Samantha", "Benjamin", "Katherine", "Samuel", "Christine",
      "Gregory", "Debra",    "Alexander", "Rachel", "Patrick",  "Carolyn",  "Frank",
      "Janet",   "Raymond",  "Maria",   "Jack",     "Olivia",   "Dennis",   "Heather",
      "Jerry",   "Helen",
  };
  return kFirst;
}

const std::vector<std::string>& DefaultLastNames() {
  static const std::vector<std::string> kLast = {
      "Smith",     "Johnson",  "Williams", "Brown",    "Jones",     "Garcia",   "Miller",
      "Davis",     "Rodriguez", "Martinez", "Hernandez", "Lopez",   "Gonzalez", "Wilson",
      "Anderson",  "Thomas",   "Taylor",   "Moore",    "Jackson",   "Martin",   "Lee",
      "Perez",     "Thompson", "White",    "Harris",   "Sanchez",   "Clark",    "Ramirez",
      "Lewis",     "Robinson", "Walker",   "Young",    "Allen",     "King",     "Wright",
      "Scott",     "Torres",   "Nguyen",   "Hill",     "Flores",    "Green",    "Adams",
      "Nelson",    "Baker",    "Hall",     "Rivera",   "Campbell",  "Mitchell", "Carter",
      "Roberts",   "Gomez",    "Phillips", "Evans",    "Turner",    "Diaz",     "Parker",
      "Cruz",      "Edwards",  "Collins",  "Reyes",    "Stewart",   "Morris",   "Morales",
      "Murphy",    "Cook",     "Rogers",   "Gutierrez", "Ortiz",    "Morgan",   "Cooper",
      "Peterson",  "Bailey",   "Reed",     "Kelly",    "Howard",    "Ramos",    "Kim",
      "Cox",       "Ward",     "Richardson", "Watson", "Brooks",    "Chavez",   "Wood",
      "James",     "Bennett",  "Gray",     "Mendoza",  "Ruiz",      "Hughes",   "Price",
      "Alvarez",   "Castillo", "Sanders",  "Patel",    "Myers",     "Long",     "Ross",
      "Foster",    "Jimenez",
  };
  return kLast;
}

}  // namespace piiaudit::corpus
