"""
Квантование балла решения в страту
"""

from bisect import bisect_right
from typing import Iterable, List

from ..config import ScoreQuantizer
from ..errors import ScoreOutOfRangeError


def in_range(score: int, q: ScoreQuantizer) -> bool:
    if q.score_min is not None and score < q.score_min:
        return False
    if q.score_max is not None and score > q.score_max:
        return False
    return True


def quantize(score: int, q: ScoreQuantizer) -> str:
    """
    Переводит балл в метку страты

    banded (по умолчанию): 1-4 -> low, 5-7 -> medium, 8-10 -> high;
    raw: сам балл в виде строки.

    Raises:
        ScoreOutOfRangeError: Балл вне объявленного диапазона

    Example:
        >>> quantize(4, ScoreQuantizer())
        'low'
        >>> quantize(3, ScoreQuantizer(mode='raw'))
        '3'
    """
    if not in_range(score, q):
        raise ScoreOutOfRangeError(score, q.score_min, q.score_max)
    if q.mode == 'raw':
        return str(score)
    return q.band_labels[bisect_right(q.band_edges, score)]


def order_strata(labels: Iterable[str], q: ScoreQuantizer) -> List[str]:
    """Порядок страт в отчете: по полосам либо по числовому значению балла"""
    labels = set(labels)
    if q.mode == 'banded':
        known = [label for label in q.band_labels if label in labels]
        return known + sorted(labels - set(known))

    def numeric_first(label: str):
        try:
            return (0, int(label), label)
        except ValueError:
            return (1, 0, label)

    return sorted(labels, key=numeric_first)
