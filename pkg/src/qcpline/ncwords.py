"""Normal forms in the *-algebra generated by alpha, alpha* and gamma = gamma*.

Free words are strings over the letters ``a`` (alpha), ``A`` (alpha*) and
``g`` (gamma).  The rewriting system

    a g  -> P g a
    A g  -> P^-1 g A
    a A  -> 1 - P^2 g g
    A a  -> 1 - g g

is terminating and confluent; its irreducible words are ``g^b a^k`` and
``g^b A^k``.  Two elements are equal modulo the relations iff their normal
forms coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .laurent import ONE, LaurentPoly, P, S, T, Scalar

Coef = LaurentPoly

# left-hand side -> list of (coefficient, replacement word)
RULES: dict[str, list[tuple[LaurentPoly, str]]] = {
    "ag": [(P, "ga")],
    "Ag": [(P ** -1, "gA")],
    "aA": [(ONE, ""), (-(P * P), "gg")],
    "Aa": [(ONE, ""), (-ONE, "gg")],
}

_ADJOINT_LETTER = {"a": "A", "A": "a", "g": "g"}


@dataclass(frozen=True, order=True)
class NormalWord:
    """``g^gamma_pow`` followed by ``a^ladder`` (ladder > 0) or ``A^-ladder``."""

    gamma_pow: int = 0
    ladder: int = 0

    def __post_init__(self):
        if self.gamma_pow < 0:
            raise ValueError("gamma power must be nonnegative")

    @property
    def word(self) -> str:
        tail = "a" * self.ladder if self.ladder > 0 else "A" * (-self.ladder)
        return "g" * self.gamma_pow + tail

    @classmethod
    def from_word(cls, word: str) -> "NormalWord":
        b = len(word) - len(word.lstrip("g"))
        rest = word[b:]
        if not rest:
            return cls(b, 0)
        if set(rest) == {"a"}:
            return cls(b, len(rest))
        if set(rest) == {"A"}:
            return cls(b, -len(rest))
        raise ValueError(f"{word!r} is not in normal form")

    def render(self) -> str:
        parts = []
        if self.gamma_pow:
            parts.append(f"g^{self.gamma_pow}")
        if self.ladder > 0:
            parts.append(f"a^{self.ladder}")
        elif self.ladder < 0:
            parts.append(f"A^{-self.ladder}")
        return " * ".join(parts)


def _find_redex(word: str, strategy: str = "leftmost") -> int:
    positions = range(len(word) - 1)
    if strategy == "rightmost":
        positions = reversed(positions)
    for i in positions:
        if word[i : i + 2] in RULES:
            return i
    return -1


def rewrite_step(word: str, pos: int) -> list[tuple[LaurentPoly, str]]:
    """Apply the rule whose left side starts at ``pos``."""
    lhs = word[pos : pos + 2]
    return [(coef, word[:pos] + rhs + word[pos + 2 :]) for coef, rhs in RULES[lhs]]


def reduce_terms(
    terms: Iterable[tuple[LaurentPoly, str]],
    strategy: str = "leftmost",
    stats: dict | None = None,
) -> "NCElement":
    """Rewrite a combination of free words to normal form.

    If ``stats`` is given, ``stats["steps"]`` receives the number of rule
    applications.
    """
    acc: dict[NormalWord, LaurentPoly] = {}
    stack = [(LaurentPoly.coerce(c), w) for c, w in terms]
    steps = 0
    while stack:
        coef, word = stack.pop()
        if coef.is_zero():
            continue
        pos = _find_redex(word, strategy)
        if pos < 0:
            nw = NormalWord.from_word(word)
            acc[nw] = acc.get(nw, LaurentPoly()) + coef
            continue
        steps += 1
        stack.extend((coef * c, w) for c, w in rewrite_step(word, pos))
    if stats is not None:
        stats["steps"] = stats.get("steps", 0) + steps
    return NCElement(acc)


def nc_normalize(word: str, coef: LaurentPoly | Scalar = 1, strategy: str = "leftmost") -> "NCElement":
    bad = set(word) - set("aAg")
    if bad:
        raise ValueError(f"unknown letters {sorted(bad)} in word {word!r}")
    return reduce_terms([(LaurentPoly.coerce(coef), word)], strategy)


class NCElement:
    """Finite combination of normal words with Laurent coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[NormalWord, LaurentPoly] | None = None):
        self._terms = {w: c for w, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def scalar(cls, value: LaurentPoly | Scalar) -> "NCElement":
        return cls({NormalWord(): LaurentPoly.coerce(value)})

    @classmethod
    def from_words(cls, pairs: Iterable[tuple[LaurentPoly | Scalar, str]]) -> "NCElement":
        """Normal form of ``sum coef * word`` for free words."""
        return reduce_terms((LaurentPoly.coerce(c), w) for c, w in pairs)

    @property
    def terms(self) -> dict[NormalWord, LaurentPoly]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "NCElement") -> "NCElement":
        if not isinstance(other, NCElement):
            other = NCElement.scalar(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, LaurentPoly()) + c
        return NCElement(out)

    __radd__ = __add__

    def __neg__(self) -> "NCElement":
        return NCElement({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "NCElement") -> "NCElement":
        if not isinstance(other, NCElement):
            other = NCElement.scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "NCElement":
        return NCElement.scalar(other) - self

    def scale(self, coef: LaurentPoly | Scalar) -> "NCElement":
        coef = LaurentPoly.coerce(coef)
        return NCElement({w: coef * c for w, c in self._terms.items()})

    def __mul__(self, other) -> "NCElement":
        if isinstance(other, (LaurentPoly, int)):
            return self.scale(other)
        if not isinstance(other, NCElement):
            return NotImplemented
        return reduce_terms(
            (c1 * c2, w1.word + w2.word)
            for w1, c1 in self._terms.items()
            for w2, c2 in other._terms.items()
        )

    def __rmul__(self, other) -> "NCElement":
        if isinstance(other, (LaurentPoly, int)):
            return self.scale(other)
        return NotImplemented

    def adjoint(self) -> "NCElement":
        return reduce_terms(
            (c.conj(), "".join(_ADJOINT_LETTER[x] for x in reversed(w.word)))
            for w, c in self._terms.items()
        )

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        text = ""
        for i, (w, c) in enumerate(sorted(self._terms.items())):
            coef = str(c)
            sign = "+"
            if len(c) > 1:
                coef = f"({coef})"
            elif coef.startswith("-"):
                sign, coef = "-", coef[1:]
            body = w.render()
            term = f"{coef} * {body}" if body else coef
            if i == 0:
                text = term if sign == "+" else f"-{term}"
            else:
                text += f" {sign} {term}"
        return text

    def __repr__(self) -> str:
        return f"NCElement({self})"


def nc_mul(x: NCElement, y: NCElement) -> NCElement:
    return x * y


def nc_adjoint(x: NCElement) -> NCElement:
    return x.adjoint()


def nc_verify_identity(lhs: NCElement, rhs: NCElement) -> bool:
    return (lhs - rhs).is_zero()


ALPHA = NCElement({NormalWord(0, 1): ONE})
ALPHA_STAR = NCElement({NormalWord(0, -1): ONE})
GAMMA = NCElement({NormalWord(1, 0): ONE})


def nc_build_generators() -> tuple[NCElement, NCElement]:
    """x1 = sqrt(c) t1 alpha + t2 gamma,  x2 = -q^-1 sqrt(c) t1 gamma + t2 alpha*."""
    Tb = T ** -1
    x1 = ALPHA.scale(S * T) + GAMMA.scale(Tb)
    x2 = GAMMA.scale(-(P * S * T)) + ALPHA_STAR.scale(Tb)
    return x1, x2


def _displayed(pairs: list[tuple[LaurentPoly, str]]) -> NCElement:
    return NCElement.from_words(pairs)


def displayed_expansions() -> dict[str, list[NCElement]]:
    """Hand-written right-hand sides of the six generator products.

    Each entry lists every displayed form (some products are written two
    or three ways); each form is built from free words and then reduced.
    """
    one = ONE
    c = S * S
    Pi = P ** -1
    Tb = T ** -1
    return {
        "x1*x1": [
            _displayed([(c, "Aa"), (S * Tb * Tb, "Ag"), (S * T * T, "ga"), (one, "gg")]),
            _displayed([(c, ""), (one - c, "gg"), (S * Tb * Tb, "Ag"), (S * T * T, "ga")]),
        ],
        "x2*x2": [
            _displayed([(one, "aA"), (-(P * S * T * T), "ag"), (-(P * S * Tb * Tb), "gA"), (P * P * c, "gg")]),
            _displayed([(one, ""), (P * P * (c - 1), "gg"), (-(P * S * T * T), "ag"), (-(P * S * Tb * Tb), "gA")]),
            _displayed([(one, ""), (P * P * (c - 1), "gg"), (-(P * P * S * T * T), "ga"), (-(P * P * S * Tb * Tb), "Ag")]),
        ],
        "x1*x2": [
            _displayed([(S * Tb * Tb, "AA"), (-(c * P), "Ag"), (one, "gA"), (-(P * S * T * T), "gg")]),
        ],
        "x2*x1": [
            _displayed([(S * T * T, "aa"), (-(c * P), "ga"), (one, "ag"), (-(P * S * Tb * Tb), "gg")]),
        ],
        "x1x1*": [
            _displayed([(c, "aA"), (S * T * T, "ag"), (S * Tb * Tb, "gA"), (one, "gg")]),
            _displayed([(c, ""), (-(c * P * P), "gg"), (S * T * T * P, "ga"), (S * Tb * Tb * P, "Ag"), (one, "gg")]),
        ],
        "x2x2*": [
            _displayed([(one, "Aa"), (-(P * S * Tb * Tb), "Ag"), (-(P * S * T * T), "ga"), (P * P * c, "gg")]),
            _displayed([(one, ""), (-one, "gg"), (-(P * S * Tb * Tb), "Ag"), (-(P * S * T * T), "ga"), (P * P * c, "gg")]),
        ],
    }


def nc_expand_canonical(which: str) -> NCElement:
    """Reduced product of generators named ``x1*x1``, ``x1x1*`` and so on."""
    x1, x2 = nc_build_generators()
    gens = {"x1": x1, "x2": x2}
    table = {
        "x1*x1": (gens["x1"].adjoint(), gens["x1"]),
        "x2*x2": (gens["x2"].adjoint(), gens["x2"]),
        "x1*x2": (gens["x1"].adjoint(), gens["x2"]),
        "x2*x1": (gens["x2"].adjoint(), gens["x1"]),
        "x1x1*": (gens["x1"], gens["x1"].adjoint()),
        "x2x2*": (gens["x2"], gens["x2"].adjoint()),
    }
    if which not in table:
        raise KeyError(f"unknown product {which!r}; expected one of {sorted(table)}")
    left, right = table[which]
    return left * right


CRITICAL_OVERLAPS = ("aAg", "Aag", "aAa", "AaA")


def critical_pair(word: str) -> tuple[NCElement, NCElement]:
    """Reduce a length-3 overlap by firing the left rule first, then the right."""
    first = reduce_terms(rewrite_step(word, 0))
    second = reduce_terms(rewrite_step(word, 1))
    return first, second


def symbolic_suite() -> list[dict]:
    """Every exact identity the engine certifies, as ``{identity, proven}`` rows."""
    x1, x2 = nc_build_generators()
    x1s, x2s = x1.adjoint(), x2.adjoint()
    a11, a22 = x1s * x1, x2s * x2
    b11, b22 = x1 * x1s, x2 * x2s
    rows: list[dict] = []

    for name, forms in displayed_expansions().items():
        got = nc_expand_canonical(name)
        for i, form in enumerate(forms):
            rows.append({"identity": f"{name} displayed form {i + 1}", "proven": nc_verify_identity(got, form)})

    rows.append({
        "identity": "x1*x1 + q^2 x2*x2 = q^2 + c",
        "proven": nc_verify_identity(a11 + a22.scale(P ** -2), NCElement.scalar(P ** -2 + S * S)),
    })
    rows.append({
        "identity": "x1x1* + x2x2* = 1 + c",
        "proven": nc_verify_identity(b11 + b22, NCElement.scalar(ONE + S * S)),
    })
    rows.append({
        "identity": "x2*x2 = 1 + c q^-2 - q^-2 x1*x1",
        "proven": nc_verify_identity(a22, NCElement.scalar(ONE + S * S * P * P) - a11.scale(P * P)),
    })
    rows.append({"identity": "[x1*x1, x2*x2] = 0", "proven": (a11 * a22 - a22 * a11).is_zero()})
    rows.append({"identity": "[x1x1*, x2x2*] = 0", "proven": (b11 * b22 - b22 * b11).is_zero()})
    rows.append({"identity": "x2*x1 = (x1*x2)*", "proven": nc_verify_identity(x2s * x1, (x1s * x2).adjoint())})

    # relations not used as rules must follow from the ones that are
    a, A, g = ALPHA, ALPHA_STAR, GAMMA
    gs = g.adjoint()
    rows.append({"identity": "g A - q^-1 A g = 0", "proven": (g * A - (A * g).scale(P)).is_zero()})
    rows.append({"identity": "a g* - q^-1 g* a = 0", "proven": (a * gs - (gs * a).scale(P)).is_zero()})
    rows.append({"identity": "a g - q^-1 g a = 0", "proven": (a * g - (g * a).scale(P)).is_zero()})
    rows.append({"identity": "g* A* - q^-1 A* g* = 0", "proven": (gs * a.adjoint() - (a.adjoint() * gs).scale(P)).is_zero()})
    rows.append({"identity": "A a + g* g = 1", "proven": (A * a + g * g - NCElement.scalar(1)).is_zero()})
    rows.append({"identity": "a A + q^-2 g* g = 1", "proven": (a * A + (g * g).scale(P * P) - NCElement.scalar(1)).is_zero()})

    for word in CRITICAL_OVERLAPS:
        left, right = critical_pair(word)
        rows.append({"identity": f"local confluence on {word}", "proven": left == right})
    return rows
