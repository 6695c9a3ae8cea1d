"""Built-in test corpus of small groups, by spec string.

The invariant suites run over every corpus group of order <= 24 with
q in {2, 3}; larger entries exercise construction and rank searches.
"""

from __future__ import annotations

from .groups import FiniteGroup, construct_group, spec_order

CORPUS_SPECS: tuple[str, ...] = (
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C12",
    "C16", "C24",
    "C2xC2", "C2xC4", "C2xC2xC2", "C3xC3", "C2xC6",
    "D6", "D8", "D10", "D12",
    "Q8", "C2xQ8",
    "S3", "S4", "A4",
    "C3wrS2", "C2wrS2",
    "C2wrS3",
)


def corpus_specs(max_order: int | None = None) -> list[str]:
    specs = list(CORPUS_SPECS)
    if max_order is not None:
        specs = [s for s in specs if spec_order(s) <= max_order]
    return specs


def corpus_groups(max_order: int | None = None) -> list[FiniteGroup]:
    return [construct_group(s) for s in corpus_specs(max_order)]
