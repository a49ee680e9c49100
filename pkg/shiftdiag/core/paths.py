####################################################################################################
#                                            paths.py                                              #
####################################################################################################
#                                                                                                  #
# Purpose: File-system locations of the example diagram corpus (``corpus/`` at the repository     #
#          root), resolved from this file so the CLI and the tests find it from any working       #
#          directory.                                                                              #
#                                                                                                  #
#          - corpus_root(): directory holding the ``.cdsl`` diagrams and ``.cpt`` models.          #
#          - corpus_file(name, suffix): one corpus entry by stem.                                  #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

from pathlib import Path

# Repository root: shiftdiag/core/paths.py -> shiftdiag/core -> shiftdiag -> root
_REPO_ROOT = Path(__file__).resolve().parent.parent.parent

DIAGRAM_SUFFIX = ".cdsl"
MODEL_SUFFIX = ".cpt"


def corpus_root() -> Path:
    candidate = _REPO_ROOT / "corpus"
    if not candidate.is_dir():
        raise FileNotFoundError(f"no corpus directory at {candidate} (source checkout required)")
    return candidate


def corpus_file(name: str, suffix: str = DIAGRAM_SUFFIX) -> Path:
    path = corpus_root() / f"{name}{suffix}"
    if not path.is_file():
        raise FileNotFoundError(f"corpus entry not found: {path}")
    return path


def corpus_names() -> list[str]:
    """Stems of every corpus diagram, sorted."""
    return sorted(p.stem for p in corpus_root().glob(f"*{DIAGRAM_SUFFIX}"))
