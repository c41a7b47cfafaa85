"""Joint clustering over declared symptom groups, end to end.

Samples a survey from the bundled Yang Deficiency reference model, builds
the joint clustering model from a mapping that combines two symptoms into
a latent feature, lets the regrouping search and cardinality selection do
their work, and prints the resulting quantification.
"""

from ltmkit.clustering import (
    SymptomGroup,
    SyndromeMapping,
    build_joint_model,
    quantify,
    regroup_search,
    select_cardinality,
)
from ltmkit.em import EMConfig
from ltmkit.fixtures import generator_model
from ltmkit.model import forward_sample

truth = generator_model("Yang Deficiency")
data = forward_sample(truth.model, 3000, seed=5)

mapping = SyndromeMapping("Yang Deficiency", (
    SymptomGroup("cold signs", ("fear of cold or cold limbs",
                                "thirst desire hot drinks"), "primary"),
    SymptomGroup("kidney", ("sore waist or knees",), "primary"),
    SymptomGroup("urination", ("frequent nocturnal urination",), "primary"),
    SymptomGroup("strength", ("lassitude of limbs or body",), "primary"),
    SymptomGroup("chest", ("chest oppression", "palpitation"), "secondary"),
    SymptomGroup("face", ("blackish lower eyelid",), "secondary"),
    SymptomGroup("sweat", ("spontaneous sweating",), "secondary"),
))

em = EMConfig(restarts=8, max_iterations=200, seed=11)
joint = build_joint_model(mapping, data, em)
print("initial wiring:", joint.feature_map)

joint = regroup_search(joint, data, em)
print("after regrouping:", joint.feature_map)

joint = select_cardinality(joint, data, em)
print("clusters selected:", joint.cluster_count)

q = quantify(joint, data, coverage=0.95)
for cluster in q.clusters:
    print(f"\n{cluster.label} (prevalence {cluster.prevalence:.2f})")
    for s in q.symptom_order:
        print(f"  {s}: {cluster.probabilities[s]:.2f}")
print("\npositive cluster(s):", q.positive_labels)
print("retained symptoms (95% information coverage):", len(q.symptom_order),
      "of", len(mapping.symptoms))
