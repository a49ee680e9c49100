"""
Helpers for the example diagram corpus and for building small diagrams in tests.

- load_corpus_diagram / load_corpus_model: parse ``corpus/<name>.cdsl`` and its ``.cpt``.
- tiny(): build a diagram from ``"a -> b"`` edge strings plus role/kind keywords.
- random_dag(): reproducible random DAGs for the exhaustive d-separation checks.
"""

import os
import sys

import numpy as np

# Add project root to path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '../..'))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from shiftdiag.bn.cpt_format import load_model  # noqa: E402
from shiftdiag.core.diagram import Node, build_diagram  # noqa: E402
from shiftdiag.core.paths import MODEL_SUFFIX, corpus_file, corpus_names  # noqa: E402
from shiftdiag.dsl.parser import load_diagram  # noqa: E402


# Expected analysis of every corpus diagram: direction, shift types by mechanism edge,
# selection types and the CLI exit code of ``analyze``.
CORPUS_EXPECTATIONS = {
    'shift_a': ('causal', {'D -> Z': 'population_shift'}, {}, 1),
    'shift_b': ('causal', {'D -> X': 'acquisition_shift'}, {}, 1),
    'shift_c': ('causal', {'D -> Y': 'annotation_shift'}, {}, 1),
    'shift_d': ('anticausal', {'D -> Y': 'prevalence_shift'}, {}, 1),
    'shift_e': ('anticausal', {'D -> Z': 'manifestation_shift'}, {}, 1),
    'shift_f': ('anticausal', {'D -> X': 'acquisition_shift'}, {}, 1),
    'selection_a': ('anticausal', {}, {'S': 'random'}, 0),
    'selection_b': ('anticausal', {}, {'S': 'image_dependent'}, 1),
    'selection_c': ('anticausal', {}, {'S': 'target_dependent'}, 1),
    'selection_d': ('anticausal', {}, {'S': 'joint_dependent'}, 1),
    'skin_lesion': ('anticausal', {}, {'referred': 'image_dependent'}, 1),
    'brain_tumour': ('causal', {'site -> tumour': 'population_shift', 'site -> mri': 'acquisition_shift'}, {}, 1),
    'scaffold': ('causal', {'dom -> age': 'population_shift', 'dom -> exp': 'annotation_shift',
                            'dom -> scn': 'acquisition_shift'}, {'sel': 'other_dependent'}, 1),
    'scaffold_aware': ('causal', {'dom -> age': 'population_shift', 'dom -> exp': 'annotation_shift',
                                  'dom -> scn': 'acquisition_shift'}, {'sel': 'other_dependent'}, 1),
}


def load_corpus_diagram(name):
    return load_diagram(corpus_file(name))


def load_corpus_model(diagram):
    return load_model(diagram, corpus_file(diagram.name, MODEL_SUFFIX))


def corpus_pairs():
    """(diagram path, model path) for every corpus entry that ships a model."""
    out = []
    for name in corpus_names():
        try:
            out.append((str(corpus_file(name)), str(corpus_file(name, MODEL_SUFFIX))))
        except FileNotFoundError:
            continue
    return out


def tiny(*edges, image=None, target=None, anatomy=None, unobserved=(), domain=(), selection=(),
         isolated=(), name='tiny'):
    """Diagram from edge strings like ``'a -> b'``; every mentioned node is observed unless listed."""
    pairs = [tuple(part.strip() for part in e.split('->')) for e in edges]
    ids = sorted({n for pair in pairs for n in pair} | set(isolated))
    roles = {image: 'image', target: 'target', anatomy: 'anatomy'}
    nodes = []
    for node_id in ids:
        kind = ('unobserved' if node_id in unobserved else 'domain' if node_id in domain
                else 'selection' if node_id in selection else 'observed')
        nodes.append(Node(node_id, kind, roles.get(node_id, 'none')))
    return build_diagram(name, nodes, pairs)


def random_dag(n_nodes, edge_prob, seed):
    """Random DAG over ``v0..v{n-1}``; edges only go from lower to higher index."""
    rng = np.random.default_rng(seed)
    ids = [f'v{i}' for i in range(n_nodes)]
    edges = [(ids[i], ids[j]) for i in range(n_nodes) for j in range(i + 1, n_nodes)
             if rng.random() < edge_prob]
    return build_diagram(f'random_{seed}', [Node(i) for i in ids], edges)
