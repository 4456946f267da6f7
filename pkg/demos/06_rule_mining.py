"""Mining valence patterns and mapping rules from the desk corpus.

Builds a throwaway project, annotates the bundled placing/motion
sentences, and aggregates the per-sentence rule groups: identical
patterns merge with summed support.
"""

import sys
import tempfile
from importlib import resources
from pathlib import Path

from framebench import rules
from framebench.project import add_corpus, init_project
from framebench.service import AnnotationService

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from conftest import annotate_desk_corpus  # reuse the desk annotation plan

data = resources.files("framebench.data")
with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    project = init_project(tmp / "proj")
    for name in ("desk_P1.xml", "desk_M1.xml", "desk_E1.xml"):
        src = tmp / name
        src.write_bytes(data.joinpath(f"corpus/{name}").read_bytes())
        add_corpus(project, src)
    service = AnnotationService(project)
    service.run_analysis()
    created = annotate_desk_corpus(service)
    print(f"validated sets: { {lu: len(ids) for lu, ids in created.items()} }\n")

    for lu_id in created:
        sets = service.asets_for_lu(lu_id, validated_only=True)
        groups = rules.aggregate(lu_id, [rules.derive_rules(a, service.framedb) for a in sets])
        print(f"{lu_id}:")
        for g in groups:
            print(f"  [{g.group_id}] {g.pattern.render():<32} voice={g.voice} cons={g.cons} support={g.support}")
            for r in g.rules:
                print(f"       {r.rule_id}: FE={r.fe:<12} PT={r.pt:<10} GF={r.gf}")
        print(service.mine(lu_id))
