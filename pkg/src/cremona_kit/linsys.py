"""Linear system classes -lambda*K + nu*f on conic bundles and their exact
pushforward through type II links.

Coefficients live in (1/2)Z, so everything is stored doubled: two_lambda,
two_nu, and doubled multiplicities keyed by orbit key.  push_type2 applies
the closed formulas; push_oracle recomputes the same step in the rank-3
lattice of the resolution (pull back, rewrite the first exceptional class
as fiber-minus-second, contract) and exists so the two can be compared on
full grids.

lambda_bound certifies the growth inequality chain for maps that leave the
fibration: beta = sum |w|(1 - m_w/lambda) over the declared large orbits,
bound = a * beta * lambda, and under the default thresholds (orbit size
>= 16, multiplicity < lambda/2, a >= 1/2) the bound exceeds 4*lambda
strictly.  The certificate is symbolic; no map is ever resolved.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadInput,
    InvalidLink,
    MultiplicityOutOfRange,
    NonpositiveLambda,
)
from .catalog import link_validate


def _doubled(value, what):
    f = Fraction(value)
    d = f * 2
    if d.denominator != 1:
        raise BadInput(f"{what} must lie in (1/2)Z, got {f}")
    return int(d)


class LinearSystemClass:
    """Class -lambda*K_X + nu*f with per-orbit multiplicities."""

    __slots__ = ("two_lambda", "two_nu", "mults", "nonfiber_support")

    def __init__(self, two_lambda, two_nu, multiplicities=None, nonfiber_support=False):
        if two_lambda < 0:
            raise BadInput("lambda must be nonnegative")
        if nonfiber_support and two_lambda < 1:
            raise BadInput("support off the fibers forces lambda >= 1/2")
        self.two_lambda = two_lambda
        self.two_nu = two_nu
        self.nonfiber_support = nonfiber_support
        mults = {}
        if multiplicities:
            for key, m in multiplicities.items():
                dm = m if isinstance(m, int) else _doubled(m, f"multiplicity at {key}")
                if not 0 <= dm <= 2 * two_lambda:
                    raise MultiplicityOutOfRange(
                        f"multiplicity {Fraction(dm, 2)} at {key} outside [0, 2*lambda]"
                    )
                if dm:
                    mults[key] = dm
        self.mults = mults

    @classmethod
    def from_halves(cls, lam, nu, multiplicities=None, nonfiber_support=False):
        ms = None
        if multiplicities:
            ms = {k: _doubled(v, f"multiplicity at {k}") for k, v in multiplicities.items()}
        return cls(_doubled(lam, "lambda"), _doubled(nu, "nu"), ms, nonfiber_support)

    @property
    def lam(self):
        return Fraction(self.two_lambda, 2)

    @property
    def nu(self):
        return Fraction(self.two_nu, 2)

    def multiplicity(self, orbit_key):
        return Fraction(self.mults.get(orbit_key, 0), 2)

    def __eq__(self, other):
        return (
            isinstance(other, LinearSystemClass)
            and other.two_lambda == self.two_lambda
            and other.two_nu == self.two_nu
            and other.mults == self.mults
        )

    def __repr__(self):
        return f"LinSys(lam={self.lam}, nu={self.nu}, m={ {k: str(Fraction(v,2)) for k,v in self.mults.items()} })"

    def to_json(self):
        return {
            "two_lambda": self.two_lambda,
            "two_nu": self.two_nu,
            "multiplicities": {k: str(Fraction(v, 2)) for k, v in sorted(self.mults.items())},
        }

    @staticmethod
    def from_json(obj):
        ms = {k: _doubled(Fraction(v), k) for k, v in obj.get("multiplicities", {}).items()}
        return LinearSystemClass(obj["two_lambda"], obj["two_nu"], ms)


def _push_data(H, link):
    if not link.is_cb_type2():
        raise InvalidLink("pushforward needs a type II link between conic bundles")
    if link.orbit_src is None or link.orbit_tgt is None:
        raise InvalidLink("pushforward needs explicit base orbits on both sides")
    verdict = link_validate(link)
    if not verdict:
        raise InvalidLink(f"link fails validation: {verdict.rule}")
    src_key, tgt_key = link.orbit_src.key(), link.orbit_tgt.key()
    size = link.orbit_src.size
    two_m = H.mults.get(src_key, 0)
    if two_m > 2 * H.two_lambda:
        raise MultiplicityOutOfRange("multiplicity exceeds 2*lambda")
    return src_key, tgt_key, size, two_m


def _rebuild(H, two_nu, src_key, tgt_key, two_m_new):
    out = LinearSystemClass.__new__(LinearSystemClass)
    out.two_lambda = H.two_lambda
    out.two_nu = two_nu
    out.nonfiber_support = H.nonfiber_support
    mults = dict(H.mults)
    mults.pop(src_key, None)
    if two_m_new:
        mults[tgt_key] = two_m_new
    else:
        mults.pop(tgt_key, None)
    out.mults = mults
    return out


def push_type2(H, link):
    """Closed-formula pushforward: lambda fixed, nu += |w|(lambda - m),
    replacement multiplicity 2*lambda - m."""
    src_key, tgt_key, size, two_m = _push_data(H, link)
    two_nu = H.two_nu + size * (H.two_lambda - two_m)
    return _rebuild(H, two_nu, src_key, tgt_key, 2 * H.two_lambda - two_m)


def push_oracle(H, link):
    """Same pushforward read off the rank-3 lattice of the resolution.

    Basis on the blown-up surface: (-K_S, fhat, E1).  Lift the class, trade
    E1 = |w| fhat - E2, then contract E2.
    """
    src_key, tgt_key, size, two_m = _push_data(H, link)
    # lift: -lam K + nu f + 0  ->  (-lam) K_S + nu fhat + (lam - m) E1
    v = [H.two_lambda, H.two_nu, H.two_lambda - two_m]
    # basis change E1 -> |w| fhat - E2
    w = [v[0], v[1] + size * v[2], -v[2]]
    # contract: matching -lam2 K_S + nu2 fhat + (lam2 - m2) E2
    two_lambda2, two_nu2 = w[0], w[1]
    two_m2 = two_lambda2 - w[2]
    assert two_lambda2 == H.two_lambda
    return _rebuild(H, two_nu2, src_key, tgt_key, two_m2)


# ---------------------------------------------------------------------------
# growth certificates


@dataclass
class GrowthCertificate:
    lambda_in: Fraction
    beta: Fraction
    a_lower: Fraction
    bound: Fraction

    def __post_init__(self):
        assert self.bound == self.a_lower * self.beta * self.lambda_in

    def to_json(self):
        return {
            "lambda": str(self.lambda_in),
            "beta": str(self.beta),
            "a_lower": str(self.a_lower),
            "bound": str(self.bound),
        }


@dataclass
class HypothesisFailure:
    hypothesis: str
    detail: str

    def __bool__(self):
        return False

    def to_json(self):
        return {"hypothesis_failure": self.hypothesis, "detail": self.detail}


def lambda_bound(lam, large_orbits, a_lower, delta_cap=16, delta=Fraction(1, 2)):
    """Growth certificate for a depth->= delta_cap map followed by a
    fibration-breaking map.

    large_orbits: iterable of (orbit size, multiplicity).  All sizes must be
    >= delta_cap and all multiplicities < delta * lambda; then
    beta > delta_cap*(1 - delta) and bound = a*beta*lambda.  With the
    default constants the bound strictly exceeds 4*lambda.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise NonpositiveLambda(f"lambda = {lam}")
    a_lower = Fraction(a_lower)
    if a_lower < Fraction(1, 2):
        return HypothesisFailure(
            "a_lower >= 1/2", f"a = {a_lower} below the divisor-class bound"
        )
    orbits = [(int(s), Fraction(m)) for s, m in large_orbits]
    if not orbits:
        return HypothesisFailure("large orbit present", "no orbits declared")
    for size, m in orbits:
        if size < delta_cap:
            return HypothesisFailure(
                f"|orbit| >= {delta_cap}", f"orbit of size {size}"
            )
        if not m < delta * lam:
            return HypothesisFailure(
                "m_w < delta*lambda", f"m = {m} vs delta*lambda = {delta * lam}"
            )
        if m < 0:
            return HypothesisFailure("m_w >= 0", f"m = {m}")
    beta = sum((Fraction(size) * (1 - m / lam) for size, m in orbits), Fraction(0))
    assert beta > Fraction(delta_cap) * (1 - delta)
    return GrowthCertificate(lam, beta, a_lower, a_lower * beta * lam)
