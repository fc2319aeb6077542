"""Parameter registry, security-constraint checks and signature-size calculators.

The 24 built-in rows cover both restrictions (CROSS, p = 127, |E| = 7 and
ternary full weight, p = 3, |E| = 2) at NIST categories 1, 3 and 5, in a
fast and a short flavour, for both proof frameworks (TCitH and VOLEitH).
Only the TCitH rows can be run; VOLEitH rows are size/constraint data.

Size accounting uses the real-valued log2(p). Each component that carries a
non-integer bit count (field vectors) is rounded up to whole bits, and the
sum is rounded up to whole bytes once.
"""

from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
import json
import math

TCITH = "tcith"
VOLEITH = "voleith"


@dataclass(frozen=True)
class ParamSet:
    id: str
    lam: int
    p: int
    z: int
    n: int
    k: int
    framework: str
    tau: int
    N: int
    w: int
    opt: str
    category: int = 0
    mu: int = 0
    eta: int = 0
    rho: int = 0
    T_open: int = 0
    table_bytes: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.framework not in (TCITH, VOLEITH):
            raise ValueError(f"unknown framework {self.framework!r}")
        need = ["lam", "p", "z", "n", "k", "tau", "N"]
        need += ["mu", "eta"] if self.framework == TCITH else ["rho", "T_open"]
        for name in need:
            if getattr(self, name) <= 0:
                raise ValueError(f"{self.id}: {name} must be positive")
        if self.k >= self.n:
            raise ValueError(f"{self.id}: need k < n")
        if self.N & (self.N - 1):
            raise ValueError(f"{self.id}: N must be a power of two")

    @property
    def d(self):
        return self.z

    @property
    def r(self):
        return self.n - self.k

    @property
    def log2p(self):
        return math.log2(self.p)

    @property
    def B(self):
        return math.ceil(16 / math.log2(self.p))

    @property
    def depth(self):
        return self.N.bit_length() - 1

    def with_(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


@dataclass(frozen=True)
class SizeBreakdown:
    sym_bits: float
    wit_bits: float
    rel_bits: float
    total_bytes: int

    @property
    def total_bits(self):
        return self.sym_bits + self.wit_bits + self.rel_bits


def _bits(x):
    # float noise guard: a product like 12 * 213 * log2(3) must not round up
    # across an integer boundary
    return math.ceil(x - 1e-9)


def tcith_size(ps):
    if ps.framework != TCITH:
        raise ValueError(f"{ps.id} is not a TCitH parameter set")
    lg = ps.log2p
    sym = ps.tau * ps.lam * (math.log2(ps.N) + 1) + 5 * ps.lam + 32
    wit = ps.tau * ps.k * lg
    rel = ps.tau * ps.eta * (ps.d - 1) * ps.mu * lg
    total = math.ceil((_bits(sym) + _bits(wit) + _bits(rel)) / 8)
    return SizeBreakdown(sym, wit, rel, total)


def voleith_size(ps):
    if ps.framework != VOLEITH:
        raise ValueError(f"{ps.id} is not a VOLEitH parameter set")
    lg = ps.log2p
    sym = (ps.tau * (ps.rho + ps.B) * lg + ps.tau * 2 * ps.lam
           + ps.T_open * ps.lam + 4 * ps.lam + 32)
    wit = ps.tau * ps.k * lg
    rel = ps.tau * (ps.d - 1) * ps.rho * lg
    total = math.ceil((_bits(sym) + _bits(wit) + _bits(rel)) / 8)
    return SizeBreakdown(sym, wit, rel, total)


def signature_size(ps):
    return tcith_size(ps) if ps.framework == TCITH else voleith_size(ps)


def soundness_error(p, mu, eta, d, N):
    """Per-repetition soundness error of the five-pass proof, as an exact Fraction."""
    batch = Fraction(1, p ** (mu * eta))
    return batch + (1 - batch) * Fraction(d, N)


def _log_p_ceil(N, p):
    """ceil(log_p N) in exact integer arithmetic."""
    e, acc = 0, 1
    while acc < N:
        acc *= p
        e += 1
    return e


# constraint labels used in violation reports
N_LE_FIELD = "N <= p^mu"
BATCH_SOUND = "p^(mu*eta) >= 2^lambda"
TCITH_SOUND = "(N/d)^tau >= 2^(lambda-w)"
VOLE_SOUND = "N^tau/d >= 2^(lambda-w)"
VOLE_FIELD = "p^rho >= 2^lambda"
VOLE_RHO = "rho >= tau*ceil(log_p N)"


def validate(ps):
    """Return the list of violated constraint labels (empty when valid).

    All inequalities are checked with exact integer arithmetic.
    """
    bad = []
    lam, w, d = ps.lam, ps.w, ps.d
    if ps.framework == TCITH:
        if ps.N > ps.p ** ps.mu:
            bad.append(N_LE_FIELD)
        if ps.p ** (ps.mu * ps.eta) < 2 ** lam:
            bad.append(BATCH_SOUND)
        # (N/d)^tau >= 2^(lam-w)  <=>  N^tau >= d^tau 2^(lam-w)
        if ps.N ** ps.tau < d ** ps.tau * 2 ** max(lam - w, 0):
            bad.append(TCITH_SOUND)
    else:
        if ps.N ** ps.tau < d * 2 ** max(lam - w, 0):
            bad.append(VOLE_SOUND)
        if ps.p ** ps.rho < 2 ** lam:
            bad.append(VOLE_FIELD)
        if ps.rho < ps.tau * _log_p_ceil(ps.N, ps.p):
            bad.append(VOLE_RHO)
    return bad


_CODES = {
    # (restriction, category): (p, z, n, k)
    ("cross", 1): (127, 7, 127, 76),
    ("cross", 3): (127, 7, 187, 111),
    ("cross", 5): (127, 7, 251, 150),
    ("ternary", 1): (3, 2, 579, 213),
    ("ternary", 3): (3, 2, 839, 309),
    ("ternary", 5): (3, 2, 1102, 406),
}
_LAMBDA = {1: 128, 3: 192, 5: 256}

# (restriction, category, opt): tau, N, mu, eta, w, bytes
_TCITH_ROWS = {
    ("cross", 1, "fast"): (24, 256, 2, 10, 4, 7650),
    ("cross", 1, "short"): (15, 2048, 2, 10, 6, 5533),
    ("ternary", 1, "fast"): (17, 256, 6, 14, 9, 3533),
    ("ternary", 1, "short"): (12, 2048, 7, 12, 8, 3095),
    ("cross", 3, "fast"): (36, 256, 2, 14, 6, 16675),
    ("cross", 3, "short"): (23, 2048, 2, 14, 4, 12354),
    ("ternary", 3, "fast"): (27, 256, 6, 21, 3, 8284),
    ("ternary", 3, "short"): (18, 2048, 7, 18, 12, 6860),
    ("cross", 5, "fast"): (48, 256, 2, 19, 7, 29839),
    ("cross", 5, "short"): (31, 2048, 2, 19, 3, 22305),
    ("ternary", 5, "fast"): (36, 256, 6, 27, 4, 14584),
    ("ternary", 5, "short"): (25, 2048, 7, 24, 6, 12608),
}

# (restriction, category, opt): tau, N, rho, T_open, w, bytes
_VOLEITH_ROWS = {
    ("cross", 1, "fast"): (16, 256, 32, 101, 3, 6432),
    ("cross", 1, "short"): (11, 2048, 22, 107, 10, 4372),
    ("ternary", 1, "fast"): (16, 256, 96, 101, 1, 3515),
    ("ternary", 1, "short"): (11, 2048, 81, 107, 8, 2974),
    ("cross", 3, "fast"): (24, 256, 48, 153, 3, 14359),
    ("cross", 3, "short"): (16, 4096, 32, 157, 3, 9361),
    ("ternary", 3, "fast"): (24, 256, 144, 153, 1, 7816),
    ("ternary", 3, "short"): (16, 4096, 128, 157, 1, 6463),
    ("cross", 5, "fast"): (32, 256, 64, 206, 3, 25573),
    ("cross", 5, "short"): (21, 4096, 42, 216, 7, 16589),
    ("ternary", 5, "fast"): (32, 256, 192, 206, 1, 13851),
    ("ternary", 5, "short"): (21, 4096, 168, 216, 5, 11521),
}


def _build():
    sets = []
    for (name, cat, opt), (tau, N, mu, eta, w, size) in _TCITH_ROWS.items():
        p, z, n, k = _CODES[(name, cat)]
        sets.append(ParamSet(f"{name}-{cat}-{opt}", _LAMBDA[cat], p, z, n, k, TCITH,
                             tau, N, w, opt, cat, mu=mu, eta=eta, table_bytes=size))
    for (name, cat, opt), (tau, N, rho, t_open, w, size) in _VOLEITH_ROWS.items():
        p, z, n, k = _CODES[(name, cat)]
        sets.append(ParamSet(f"{name}-{cat}-{opt}-v", _LAMBDA[cat], p, z, n, k, VOLEITH,
                             tau, N, w, opt, cat, rho=rho, T_open=t_open,
                             table_bytes=size))
    return tuple(sets)


_BUILTIN = _build()
_BY_ID = {ps.id: ps for ps in _BUILTIN}


def builtin_sets():
    return list(_BUILTIN)


def table_sets(table):
    """Rows of the TCitH (1) or VOLEitH (2) size table, in table order."""
    fw = {1: TCITH, 2: VOLEITH}[table]
    return [ps for ps in _BUILTIN if ps.framework == fw]


def get(param_id):
    try:
        return _BY_ID[param_id]
    except KeyError:
        raise KeyError(f"unknown parameter set {param_id!r}; "
                       f"known: {', '.join(_BY_ID)}") from None


def toy(N=4, p=3, mu=2, eta=1, k=2, n=4, tau=1, w=0, lam=128, z=None):
    """Tiny TCitH parameters for exhaustive and Monte Carlo experiments.

    These deliberately violate the security constraints.
    """
    if z is None:
        z = 7 if p == 127 else 2
    return ParamSet(f"toy-p{p}-mu{mu}-N{N}", lam, p, z, n, k, TCITH, tau, N, w,
                    "toy", 0, mu=mu, eta=eta)


def dump_json(sets, fp=None):
    text = json.dumps([ps.to_dict() for ps in sets], indent=2)
    if fp is not None:
        fp.write(text)
    return text


def load_json(text):
    return [ParamSet.from_dict(d) for d in json.loads(text)]
