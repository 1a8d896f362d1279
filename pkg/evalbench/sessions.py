"""
RealGaze session tags and the reporting groups built from them.

Sessions ``a`` to ``i`` vary lighting and wearables. Session ``i`` belongs
to no named subgroup and only counts towards Overall.
"""

from typing import Dict, Iterable, List, Mapping, Set, Tuple

from utils.exceptions import DataValidationError

SESSIONS: Tuple[str, ...] = tuple("abcdefghi")

GROUPS: Dict[str, Tuple[str, ...]] = {
    "Overall": SESSIONS,
    "Ideal": ("a", "b"),
    "Side-Lit": ("c", "d"),
    "Glasses": ("e", "f"),
    "Masks": ("g", "h"),
}
GROUP_ORDER: Tuple[str, ...] = tuple(GROUPS)


def check_session(session: object) -> str:
    if not isinstance(session, str) or session not in SESSIONS:
        raise DataValidationError(
            f"Unknown session tag {session!r}; expected one of {''.join(SESSIONS)}"
        )
    return session


def groups_for(session: str) -> List[str]:
    """Report groups a session contributes to, in report order."""
    s = check_session(session)
    return [g for g in GROUP_ORDER if s in GROUPS[g]]


def reduced_session_subjects(sessions_by_subject: Mapping[str, Iterable[str]]) -> Set[str]:
    """Subjects that did not take part in every session type."""
    full = set(SESSIONS)
    return {
        subject
        for subject, sessions in sessions_by_subject.items()
        if not full.issubset({check_session(s) for s in sessions})
    }
