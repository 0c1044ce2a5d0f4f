"""Task-relevant principle selection for generation-context budgets.

Scoring is deterministic token overlap: the task and each principle's
tags/title/constraint are tokenized identically (lowercase, split on
non-alphanumeric runs, tokens shorter than 3 characters dropped) and the
score is the number of distinct shared tokens. No stemming, no embeddings;
ties always break by constitution document order so repeated runs agree
byte for byte.

Strategies:

* ``full``         every principle, in document order;
* ``relevant``     the top 5 positive scorers, padded (MUST principles
                   first, document order) up to 3 when fewer score;
* ``hierarchical`` the best scorer of each category, topped up with the
                   next-best remaining scorers to at most 8, padded up to 5.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from conlaw.constitution import Constitution, Principle

__all__ = [
    "STRATEGIES",
    "Selection",
    "UnknownStrategy",
    "score_principle",
    "select",
    "tokenize",
]

STRATEGIES = ("full", "relevant", "hierarchical")

RELEVANT_MAX = 5
RELEVANT_MIN = 3
HIERARCHICAL_MAX = 8
HIERARCHICAL_MIN = 5

_TOKEN_SPLIT_RE = re.compile(r"[^a-z0-9]+")
_MIN_TOKEN_LEN = 3


class UnknownStrategy(Exception):
    def __init__(self, strategy: str):
        super().__init__(f"unknown strategy: {strategy!r} (expected one of {', '.join(STRATEGIES)})")
        self.strategy = strategy


@dataclass(frozen=True)
class Selection:
    strategy: str
    items: tuple[tuple[str, int], ...]  # (principle_id, score)
    task: str


def tokenize(text: str) -> set[str]:
    return {
        tok
        for tok in _TOKEN_SPLIT_RE.split(text.lower())
        if len(tok) >= _MIN_TOKEN_LEN
    }


def score_principle(p: Principle, task: str) -> int:
    """Distinct-token overlap between the task and the principle's vocabulary."""
    task_tokens = tokenize(task)
    if not task_tokens:
        return 0
    vocabulary = set(p.tags) | tokenize(p.title) | tokenize(p.constraint)
    return len(task_tokens & vocabulary)


def _doc_order(c: Constitution) -> dict[str, int]:
    return {p.id: i for i, p in enumerate(c.principles)}


def _pad(
    chosen: list[str], c: Constitution, target: int
) -> list[str]:
    """Top up ``chosen`` to ``target`` in document order, MUST principles first."""
    have = set(chosen)
    for wanted_level in ("MUST", None):
        for p in c.principles:
            if len(chosen) >= target:
                return chosen
            if p.id in have:
                continue
            if wanted_level is not None and p.level != wanted_level:
                continue
            chosen.append(p.id)
            have.add(p.id)
    return chosen


def select(c: Constitution, task: str, strategy: str) -> Selection:
    """Choose a principle subset for ``task`` under the given strategy."""
    if strategy not in STRATEGIES:
        raise UnknownStrategy(strategy)
    scores = {p.id: score_principle(p, task) for p in c.principles}
    order = _doc_order(c)

    if strategy == "full":
        items = tuple((p.id, scores[p.id]) for p in c.principles)
        return Selection(strategy=strategy, items=items, task=task)

    def ranked(ids):
        return sorted(ids, key=lambda pid: (-scores[pid], order[pid]))

    if strategy == "relevant":
        positive = ranked([p.id for p in c.principles if scores[p.id] > 0])
        chosen = positive[:RELEVANT_MAX]
        if len(chosen) < RELEVANT_MIN:
            chosen = _pad(chosen, c, min(RELEVANT_MIN, len(c.principles)))
    else:  # hierarchical
        heads: list[str] = []
        for cat in c.categories:
            members = [p.id for p in c.principles if p.category == cat.id]
            if members:
                heads.append(ranked(members)[0])
        heads = ranked(heads)[:HIERARCHICAL_MAX]
        chosen = list(heads)
        for pid in ranked([p.id for p in c.principles if scores[p.id] > 0]):
            if len(chosen) >= HIERARCHICAL_MAX:
                break
            if pid not in chosen:
                chosen.append(pid)
        if len(chosen) < HIERARCHICAL_MIN:
            chosen = _pad(chosen, c, min(HIERARCHICAL_MIN, len(c.principles)))

    ordered = ranked(chosen)
    return Selection(
        strategy=strategy,
        items=tuple((pid, scores[pid]) for pid in ordered),
        task=task,
    )
