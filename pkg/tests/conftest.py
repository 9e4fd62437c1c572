from __future__ import annotations

import pytest

from packmm import IntMatrix

# 8x8 single-digit worked example and its product
GOLDEN_A = [
    [8, 8, 5, 0, 0, 4, 8, 0],
    [4, 8, 6, 5, 0, 3, 7, 5],
    [2, 1, 6, 7, 3, 3, 7, 1],
    [2, 7, 3, 7, 0, 3, 1, 4],
    [2, 1, 8, 2, 7, 7, 6, 0],
    [5, 4, 5, 7, 2, 5, 9, 8],
    [6, 6, 4, 5, 7, 6, 4, 7],
    [3, 0, 0, 0, 0, 2, 8, 9],
]
GOLDEN_B = [
    [4, 1, 4, 4, 6, 3, 2, 2],
    [2, 5, 8, 1, 7, 6, 7, 6],
    [4, 2, 8, 9, 9, 7, 1, 4],
    [6, 3, 6, 9, 0, 5, 1, 7],
    [1, 5, 6, 5, 2, 1, 3, 5],
    [0, 0, 5, 4, 0, 0, 6, 1],
    [6, 9, 6, 4, 9, 8, 1, 4],
    [0, 9, 2, 4, 9, 7, 9, 6],
]
GOLDEN_C = [
    [116, 130, 204, 133, 221, 171, 109, 120],
    [128, 179, 225, 183, 242, 218, 145, 176],
    [121, 127, 183, 185, 151, 155, 67, 135],
    [82, 109, 159, 137, 133, 140, 118, 138],
    [97, 118, 205, 186, 159, 133, 90, 122],
    [146, 219, 241, 230, 260, 239, 167, 202],
    [113, 193, 244, 214, 227, 195, 187, 198],
    [60, 156, 88, 88, 171, 136, 107, 94],
]


@pytest.fixture
def golden():
    return IntMatrix(GOLDEN_A, 1), IntMatrix(GOLDEN_B, 1), IntMatrix(GOLDEN_C)


# acceptance criteria report: criterion number -> list of (part, passed, detail)
_ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


class _Recorder:
    def __init__(self, number: int):
        self.number = number

    def check(self, part: str, passed: bool, detail: str = "") -> None:
        _ACCEPTANCE.setdefault(self.number, []).append((part, bool(passed), detail))
        line = f"criterion {self.number} [{part}]: {'PASS' if passed else 'FAIL'} {detail}".rstrip()
        print(line)
        assert passed, line

    __call__ = check


@pytest.fixture
def criterion():
    return _Recorder


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[number]
        ok = all(p for _, p, _ in parts)
        failed = [name for name, p, _ in parts if not p]
        tail = f" ({len(parts)} checks)" if ok else f" failed: {', '.join(failed)}"
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}{tail}")
