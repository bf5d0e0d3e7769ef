"""Hash-consed elements of the terminal sequence 1, F1, FF1, ...

An element of level n+1 is a functor value whose atoms are ids of level-n
elements; level 0 has the single element ``UNIT``.  Interning makes
structural equality an integer comparison.
"""
from .errors import SizeError
from .finset import canon
from .functors import fmap

UNIT = 0
DEFAULT_TERM_CAP = 1_000_000


class TermTable:
    def __init__(self, functor, cap=DEFAULT_TERM_CAP):
        self.functor = functor
        self.cap = cap
        self._ids = {(0, None): UNIT}
        self._nodes = [(0, None)]
        self._step = {}

    def __len__(self):
        return len(self._nodes)

    def intern(self, level, value):
        key = (level, value)
        tid = self._ids.get(key)
        if tid is None:
            if len(self._nodes) >= self.cap:
                raise SizeError(f"term table exceeds {self.cap} nodes",
                                count=len(self._nodes) + 1, cap=self.cap)
            tid = len(self._nodes)
            self._ids[key] = tid
            self._nodes.append(key)
        return tid

    def level(self, tid):
        return self._nodes[tid][0]

    def value(self, tid):
        return self._nodes[tid][1]

    def step(self, tid):
        """The connecting map Z_{n+1} -> Z_n of the terminal sequence.

        Z_1 -> Z_0 is the unique map to the terminal set; Z_{n+2} -> Z_{n+1}
        is F applied to Z_{n+1} -> Z_n.
        """
        if tid in self._step:
            return self._step[tid]
        level, value = self._nodes[tid]
        if level == 0:
            raise ValueError("the terminal set has no predecessor level")
        if level == 1:
            out = UNIT
        else:
            out = self.intern(level - 1, fmap(self.functor, self.step, value))
        self._step[tid] = out
        return out

    def render(self, tid):
        level, value = self._nodes[tid]
        if level == 0:
            return "*"
        return canon(fmap(self.functor, lambda t: _Rendered(self.render(t)), value))


class _Rendered:
    __slots__ = ("text",)

    def __init__(self, text):
        self.text = text

    def __canon__(self):
        return self.text
