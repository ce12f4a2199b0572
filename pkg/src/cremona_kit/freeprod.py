"""Free products of direct sums of Z/2Z, and the evaluation of groupoid
words into them.

An element is an alternating word of letters (factor key, nonempty bit
set).  Multiplication concatenates and renormalizes: adjacent letters in
the same factor merge by symmetric difference (each bit is an involution),
empty letters vanish.  The stack pass below computes the unique normal
form in one sweep.

homo_eval sends a type II conic-bundle letter of depth >= 16 to the
generator (class key, {depth}) and everything else to the identity;
homo_refined_eval routes Hirzebruch-class letters into a single direct-sum
factor indexed by depth and the degree-5/6 classes into per-class factors
indexed by n = (depth-1)/2 for the odd depths the explicit constructions
produce.  Even depths >= 16 are legal inputs to the coarse map; the refined
map keeps them in a flagged auxiliary index rather than dropping them.
"""

from dataclasses import dataclass, field as dc_field

from .errors import ChainBreak, UnresolvedClass
from .catalog import ConicBundleClassKey, cb_class_key
from .errors import NonRational
from .rewrite import LinkLetter


@dataclass(frozen=True)
class FreeProductElement:
    word: tuple  # ((factor_key, frozenset bits), ...), alternating, no empties

    def is_identity(self):
        return not self.word

    def __mul__(self, other):
        return fp_normalize(self.word + other.word)

    def __len__(self):
        return len(self.word)

    def factors(self):
        return [f for f, _ in self.word]

    def __repr__(self):
        if not self.word:
            return "1"
        return " * ".join(f"({f}, {sorted(map(str, bits))})" for f, bits in self.word)

    def to_json(self):
        out = []
        for f, bits in self.word:
            fj = f.to_json() if isinstance(f, ConicBundleClassKey) else list(f)
            out.append(
                {
                    "factor": fj,
                    "bits": [
                        list(b) if isinstance(b, tuple) else b
                        for b in sorted(bits, key=_bit_sort)
                    ],
                }
            )
        return {"word": out}

    @staticmethod
    def from_json(obj):
        letters = []
        for item in obj["word"]:
            fj = item["factor"]
            factor = (
                ConicBundleClassKey.from_json(fj) if isinstance(fj, dict) else tuple(fj)
            )
            bits = frozenset(
                tuple(b) if isinstance(b, list) else b for b in item["bits"]
            )
            letters.append((factor, bits))
        return fp_normalize(letters)


def _bit_sort(b):
    return (0, b, "") if isinstance(b, int) else (1, 0, str(b))


IDENTITY = FreeProductElement(())


def fp_normalize(raw):
    """Unique alternating normal form of a letter sequence."""
    stack = []
    for factor, bits in raw:
        bits = frozenset(bits)
        if stack and stack[-1][0] == factor:
            merged = stack[-1][1] ^ bits
            stack.pop()
            if merged:
                stack.append((factor, merged))
        elif bits:
            stack.append((factor, bits))
    return FreeProductElement(tuple(stack))


def fp_normalize_bruteforce(raw):
    """Oracle: apply single rewriting steps to a fixpoint."""
    word = [(f, frozenset(b)) for f, b in raw]
    changed = True
    while changed:
        changed = False
        for i, (f, b) in enumerate(word):
            if not b:
                del word[i]
                changed = True
                break
            if i + 1 < len(word) and word[i + 1][0] == f:
                word[i : i + 2] = [(f, b ^ word[i + 1][1])]
                changed = True
                break
    return FreeProductElement(tuple(word))


def _word_chains(w):
    prev = w.source
    for i, letter in enumerate(w.letters):
        if letter.src.key() != prev.key():
            raise ChainBreak(f"letters do not chain at position {i}")
        prev = letter.tgt
    if prev.key() != w.target.key():
        raise ChainBreak("word does not reach its declared target")


_CLASS_KEY_CACHE = {}


def _class_key(model):
    mk = model.key()
    if mk not in _CLASS_KEY_CACHE:
        try:
            _CLASS_KEY_CACHE[mk] = cb_class_key(model)
        except NonRational as exc:
            raise UnresolvedClass(str(exc))
    return _CLASS_KEY_CACHE[mk]


def homo_eval(w, delta=16):
    """Image of a groupoid word: one generator per type II conic-bundle
    letter of depth >= delta, indexed by its equivalence class."""
    _word_chains(w)
    letters = []
    for letter in w.letters:
        if not isinstance(letter, LinkLetter):
            continue
        link = letter.link
        if link.is_cb_type2() and link.depth >= delta:
            letters.append((_class_key(link.source), frozenset({link.depth})))
    return fp_normalize(letters)


I0 = ("I0",)


def _refined_factor_and_bit(key, depth):
    if key.family == "hirzebruch":
        return I0, depth
    factor = ("J5" if key.family == "dp5" else "J6", key.class_id)
    if depth % 2 == 1 and depth >= 17:
        return factor, ("n", (depth - 1) // 2)
    return factor, ("aux", depth)  # outside the stated odd-depth index set


def homo_refined_eval(w, field=None):
    """Image in the refined target: I0 for the Hirzebruch class, one free
    factor per degree-5/6 orbit class, indexed by n with depth = 2n+1."""
    _word_chains(w)
    letters = []
    for letter in w.letters:
        if not isinstance(letter, LinkLetter):
            continue
        link = letter.link
        if link.is_cb_type2() and link.depth >= 16:
            if field is not None and link.orbit_src is not None:
                if link.orbit_src.field != field:
                    raise UnresolvedClass("letter lives over a different field")
            factor, bit = _refined_factor_and_bit(_class_key(link.source), link.depth)
            letters.append((factor, frozenset({bit})))
    return fp_normalize(letters)


@dataclass
class RefinedTarget:
    """Abelianized view of a refined image: per-factor bit sets."""

    hirzebruch_factor: frozenset = frozenset()
    j5_factors: dict = dc_field(default_factory=dict)
    j6_factors: dict = dc_field(default_factory=dict)
    aux: dict = dc_field(default_factory=dict)  # flagged even-depth bits

    def __post_init__(self):
        for factors in (self.j5_factors, self.j6_factors):
            for bits in factors.values():
                assert all(n >= 8 for n in bits), "J-factor indices are n >= 8"

    @staticmethod
    def from_element(elem):
        out = RefinedTarget()
        for factor, bits in elem.word:
            if factor == I0:
                out.hirzebruch_factor = out.hirzebruch_factor ^ bits
                continue
            fam, cid = factor
            table = out.j5_factors if fam == "J5" else out.j6_factors
            for bit in bits:
                tag, val = bit
                if tag == "n":
                    table[cid] = table.get(cid, frozenset()) ^ {val}
                else:
                    out.aux.setdefault((fam, cid), set()).add(val)
        return out

    def to_json(self):
        return {
            "I0": sorted(self.hirzebruch_factor),
            "J5": {k: sorted(v) for k, v in sorted(self.j5_factors.items())},
            "J6": {k: sorted(v) for k, v in sorted(self.j6_factors.items())},
            "aux": {f"{fam}:{cid}": sorted(v) for (fam, cid), v in sorted(self.aux.items())},
        }


def witness_free_factors(elements):
    """Check that the images lie in pairwise distinct free factors: every
    pairwise product has normal-form length 2."""
    for i in range(len(elements)):
        for j in range(len(elements)):
            if i == j:
                continue
            prod = elements[i] * elements[j]
            if len(prod) != 2:
                return False
    return True
