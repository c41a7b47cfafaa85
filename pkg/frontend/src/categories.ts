// Examination-category grouping for the master checklist, following the
// four sections of the survey instrument the rules were derived from.
// Symptoms outside the catalogue fall into "other".

export const CATEGORY_ORDER = [
  "inspection",
  "inquiring",
  "tongue",
  "palpation",
  "other",
] as const;

export type Category = (typeof CATEGORY_ORDER)[number];

const CATALOGUE: Record<Exclude<Category, "other">, string[]> = {
  inspection: [
    "sallow complexion",
    "pale complexion",
    "dim complexion",
    "flushed face",
    "pale lips",
    "purple or darkish lips",
    "blackish lower eyelid",
    "scaly skin",
  ],
  inquiring: [
    "distending headache",
    "stabbing headache",
    "hollow headache",
    "throbbing headache",
    "dizzy headache",
    "head feels as if swathed",
    "dizziness",
    "insomnia",
    "dreamfulness",
    "agitation or short temper",
    "blurred vision",
    "dry eyes",
    "tinnitus resemble cicada",
    "tinnitus resemble tide",
    "thirst desire hot drinks",
    "thirst desire cold drinks",
    "thirst desire no drinks",
    "dry mouth or throat",
    "bitter taste in mouth",
    "bland taste in mouth",
    "fetid mouth odor",
    "sticky or greasy feel in mouth",
    "aphtha on mouth or tongue",
    "expectoration",
    "mental fatigue",
    "short of breath",
    "lack of strength",
    "palpitation",
    "chest oppression",
    "hypochondrium distension or pain",
    "sighing",
    "nausea or vomiting",
    "vomiting of saliva",
    "acid swallow or epigastric upset",
    "anorexia",
    "swift digestion rapid hungering",
    "abdominal distension",
    "sore waist or knees",
    "lassitude of limbs or body",
    "numbness",
    "trembling of limbs",
    "muscular twitching",
    "fear of cold or cold limbs",
    "vexing heat in chest",
    "edema",
    "spontaneous sweating",
    "hemihidrosis",
    "tidal fever or night sweat",
    "clear profuse urination",
    "brownish and scanty urination",
    "frequent nocturnal urination",
    "dripping urination",
    "urinary incontinence",
    "asthenia of defecation",
    "dry stool or constipation",
    "loose stool",
    "undigested food in stool",
    "diarrhea before dawn",
    "loose stool following dry feces",
  ],
  tongue: [
    "pale tongue",
    "red tongue",
    "deep-red tongue",
    "darkish tongue",
    "fissured tongue",
    "fat tongue",
    "thin tongue",
    "dry tongue",
    "tooth-marked tongue",
    "varicose sublingual-veins",
    "tongue with ecchymosis",
    "white tongue fur",
    "yellow tongue fur",
    "little tongue fur",
    "thick tongue fur",
    "greasy tongue fur",
  ],
  palpation: [
    "taut pulse",
    "tense pulse",
    "slippery pulse",
    "astringent pulse",
    "fast pulse",
    "sunken pulse",
    "moderate pulse",
    "thin pulse",
    "slow pulse",
    "feeble pulse",
  ],
};

const LOOKUP = new Map<string, Category>();
for (const [category, names] of Object.entries(CATALOGUE)) {
  for (const name of names) LOOKUP.set(name, category as Category);
}

export function categoryOf(symptom: string): Category {
  return LOOKUP.get(symptom) ?? "other";
}

/** Group a deduplicated symptom list by examination category, keeping the
 * catalogue's clinical scanning order within each group. */
export function groupByCategory(symptoms: string[]): Map<Category, string[]> {
  const unique = [...new Set(symptoms)];
  const grouped = new Map<Category, string[]>();
  for (const category of CATEGORY_ORDER) {
    const inCatalogue = category !== "other" ? CATALOGUE[category] : null;
    const members = inCatalogue
      ? inCatalogue.filter((s) => unique.includes(s))
      : unique.filter((s) => categoryOf(s) === "other").sort();
    if (members.length > 0) grouped.set(category, members);
  }
  return grouped;
}
