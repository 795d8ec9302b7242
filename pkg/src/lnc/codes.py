"""Linear network codes: local kernels, global kernels, verification.

Two code flavors share the machinery:

* `ScalarCode` assigns one field element of GF(p^k) per adjacent edge pair.
* `CodeAssignment` is a vector code of dimension L over a prime field;
  kernels are L x L matrices.

Message vectors are rows and kernels multiply from the right.  Global
kernels of the source edges juxtapose to the identity when the source has
exactly `omega` outgoing edges and no explicit source rows are assigned;
otherwise the code must provide kernels for the virtual source inputs
(edge ids -1, -2, ..., -omega), which is how combination networks encode
their fan-out.  Unassigned adjacent pairs act as zero kernels.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import InputError
from .fields import Felt, FieldSpec, make_field, phi_lift
from .matrices import MatF
from .networks import Network


def source_input_ids(net: Network) -> list[int]:
    """Virtual input edge ids carrying the omega source rows."""
    return [-1 - i for i in range(net.omega)]


def adjacent_pairs(net: Network, include_source: bool = True) -> list[tuple[int, int]]:
    """All (d, e) pairs with head(d) = tail(e), plus virtual source pairs."""
    pairs = []
    if include_source:
        for e in net.source_edges():
            pairs.extend((v, e.id) for v in source_input_ids(net))
    for v in net.nodes:
        if v == net.source:
            continue
        ins = net.in_edges(v)
        outs = net.out_edges(v)
        for d in ins:
            for e in outs:
                pairs.append((d.id, e.id))
    return pairs


@dataclass(frozen=True)
class ScalarCode:
    """Scalar linear code over GF(p^k): one field element per adjacent pair."""

    net: Network
    fieldspec: FieldSpec
    kernels: dict[tuple[int, int], Felt] = field(default_factory=dict, compare=False)

    def kernel(self, d: int, e: int) -> Felt:
        return self.kernels.get((d, e), self.fieldspec.zero())

    def to_json_dict(self) -> dict:
        return {
            "field": self.fieldspec.to_json_dict(),
            "kernels": [
                {"d": d, "e": e, "coeffs": list(v.coeffs)} for (d, e), v in sorted(self.kernels.items())
            ],
        }

    @staticmethod
    def from_json_dict(net: Network, d: dict) -> "ScalarCode":
        spec = FieldSpec.from_json_dict(d["field"])
        kernels = {
            (int(k["d"]), int(k["e"])): Felt(spec, tuple(int(c) for c in k["coeffs"]))
            for k in d["kernels"]
        }
        return ScalarCode(net, spec, kernels)


@dataclass(frozen=True)
class CodeAssignment:
    """Vector linear code of dimension L over the prime field GF(p)."""

    net: Network
    base: FieldSpec
    dim: int
    kernels: dict[tuple[int, int], MatF] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.base.k != 1:
            raise InputError("vector codes are defined over a prime base field")
        for (d, e), m in self.kernels.items():
            if (m.rows, m.cols) != (self.dim, self.dim) or m.p != self.base.p:
                raise InputError(f"kernel for pair ({d},{e}) has wrong shape or field")

    def kernel(self, d: int, e: int) -> MatF:
        m = self.kernels.get((d, e))
        return m if m is not None else MatF.zeros(self.base.p, self.dim, self.dim)

    def to_json_dict(self) -> dict:
        return {
            "base": self.base.to_json_dict(),
            "dim": self.dim,
            "kernels": [
                {"d": d, "e": e, "mat": m.to_json_dict()} for (d, e), m in sorted(self.kernels.items())
            ],
        }

    @staticmethod
    def from_json_dict(net: Network, d: dict) -> "CodeAssignment":
        base = FieldSpec.from_json_dict(d["base"])
        kernels = {(int(k["d"]), int(k["e"])): MatF.from_json_dict(k["mat"]) for k in d["kernels"]}
        return CodeAssignment(net, base, int(d["dim"]), kernels)


def _uses_source_rows(code) -> bool:
    return any(d < 0 for d, _ in code.kernels)


def _check_source_shape(code) -> None:
    net = code.net
    if len(net.source_edges()) != net.omega and not _uses_source_rows(code):
        raise InputError(
            "source has more outgoing edges than its dimension; "
            "the code must assign kernels to the virtual source inputs"
        )


# ---------------------------------------------------------------------------
# Vector codes
# ---------------------------------------------------------------------------


def propagate(code: CodeAssignment) -> dict[int, MatF]:
    """Global encoding kernels F_e (omega*L x L), keyed by edge id."""
    _check_source_shape(code)
    net, L, p = code.net, code.dim, code.base.p
    omega = net.omega
    F: dict[int, MatF] = {}
    explicit = _uses_source_rows(code)
    for idx, e in enumerate(net.source_edges()):
        if explicit:
            F[e.id] = MatF.vstack([code.kernel(-1 - i, e.id) for i in range(omega)])
        else:
            blocks = [MatF.identity(p, L) if i == idx else MatF.zeros(p, L, L) for i in range(omega)]
            F[e.id] = MatF.vstack(blocks)
    for e in net.edges:
        if e.tail == net.source:
            continue
        acc = MatF.zeros(p, omega * L, L)
        for d in net.in_edges(e.tail):
            k = code.kernels.get((d.id, e.id))
            if k is not None:
                acc = acc + F[d.id].mul(k)
        F[e.id] = acc
    return F


@dataclass
class SolutionReport:
    """Verdict of a solution check with per-receiver rank data."""

    ok: bool
    required_rank: int
    receiver_ranks: dict[str, int]
    failing: list[str]
    decoders: dict = field(default_factory=dict, repr=False)

    def to_json_dict(self) -> dict:
        return {
            "solution": self.ok,
            "required_rank": self.required_rank,
            "receiver_ranks": dict(sorted(self.receiver_ranks.items())),
            "failing_receivers": sorted(self.failing),
        }


def is_solution(code: CodeAssignment) -> SolutionReport:
    """Check full rank of every receiver's juxtaposed global kernels.

    Decoding matrices for passing receivers are cached on the report.
    """
    net = code.net
    F = propagate(code)
    need = net.omega * code.dim
    ranks: dict[str, int] = {}
    failing = []
    decoders = {}
    ident = MatF.identity(code.base.p, need)
    for t in net.receivers:
        ins = sorted(net.in_edges(t), key=lambda e: e.id)
        J = MatF.hstack([F[e.id] for e in ins])
        r = J.rank()
        ranks[t] = r
        if r != need:
            failing.append(t)
        else:
            decoders[t] = J.solve_right(ident)
    return SolutionReport(not failing, need, ranks, failing, decoders)


def simulate_decode(code: CodeAssignment, trials: int, seed: int,
                    report: SolutionReport | None = None) -> dict:
    """Push random messages edge by edge and decode at every receiver.

    Requires a verified solution; a decode mismatch would mean the global
    kernel algebra and the local propagation disagree.
    """
    if report is None:
        report = is_solution(code)
    if not report.ok:
        raise InputError("simulate_decode needs a verified solution")
    net, L, p = code.net, code.dim, code.base.p
    omega = net.omega
    rng = random.Random(seed)
    explicit = _uses_source_rows(code)
    failures = 0
    for _ in range(trials):
        msg = [rng.randrange(p) for _ in range(omega * L)]
        row = MatF.from_rows(p, [msg])
        values: dict[int, MatF] = {}
        for idx, e in enumerate(net.source_edges()):
            if explicit:
                k = MatF.vstack([code.kernel(-1 - i, e.id) for i in range(omega)])
                values[e.id] = row.mul(k)
            else:
                values[e.id] = MatF.from_rows(p, [msg[idx * L : (idx + 1) * L]])
        for e in net.edges:
            if e.tail == net.source:
                continue
            acc = MatF.zeros(p, 1, L)
            for d in net.in_edges(e.tail):
                k = code.kernels.get((d.id, e.id))
                if k is not None:
                    acc = acc + values[d.id].mul(k)
            values[e.id] = acc
        for t in net.receivers:
            ins = sorted(net.in_edges(t), key=lambda e: e.id)
            received = MatF.hstack([values[e.id] for e in ins])
            decoded = received.mul(report.decoders[t])
            if list(decoded.row(0)) != msg:
                failures += 1
    return {"trials": trials, "receivers": len(net.receivers), "failures": failures,
            "ok": failures == 0}


# ---------------------------------------------------------------------------
# Scalar codes (extension-field arithmetic on tiny dense systems)
# ---------------------------------------------------------------------------


def _felt_rank(rows: list[list[Felt]], spec: FieldSpec) -> int:
    m = [row[:] for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    rank = 0
    for col in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if not m[i][col].is_zero()), -1)
        if piv < 0:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col].inv()
        m[rank] = [x * inv for x in m[rank]]
        for i in range(n_rows):
            if i != rank and not m[i][col].is_zero():
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def _felt_solve_right(rows: list[list[Felt]], spec: FieldSpec) -> list[list[Felt]]:
    """X with rows . X = I, for a full-row-rank matrix over the field."""
    n_rows = len(rows)
    n_cols = len(rows[0])
    ident = [[spec.one() if i == j else spec.zero() for j in range(n_rows)] for i in range(n_rows)]
    aug = [rows[i][:] + ident[i] for i in range(n_rows)]
    pivots = []
    r = 0
    for col in range(n_cols):
        piv = next((i for i in range(r, n_rows) if not aug[i][col].is_zero()), -1)
        if piv < 0:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][col].inv()
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n_rows):
            if i != r and not aug[i][col].is_zero():
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == n_rows:
            break
    if r < n_rows:
        raise InputError("scalar system is rank deficient")
    x = [[spec.zero()] * n_rows for _ in range(n_cols)]
    for row_idx, col in enumerate(pivots):
        x[col] = aug[row_idx][n_cols:]
    return x


def propagate_scalar(code: ScalarCode) -> dict[int, list[Felt]]:
    """Global kernels as omega-entry columns of field elements, per edge."""
    _check_source_shape(code)
    net, spec = code.net, code.fieldspec
    omega = net.omega
    f: dict[int, list[Felt]] = {}
    explicit = _uses_source_rows(code)
    src = net.source_edges()
    for idx, e in enumerate(src):
        if explicit:
            f[e.id] = [code.kernel(-1 - i, e.id) for i in range(omega)]
        else:
            f[e.id] = [spec.one() if i == idx else spec.zero() for i in range(omega)]
    for e in net.edges:
        if e.tail == net.source:
            continue
        acc = [spec.zero()] * omega
        for d in net.in_edges(e.tail):
            k = code.kernels.get((d.id, e.id))
            if k is not None and not k.is_zero():
                acc = [a + fd * k for a, fd in zip(acc, f[d.id])]
        f[e.id] = acc
    return f


def is_solution_scalar(code: ScalarCode) -> SolutionReport:
    net, spec = code.net, code.fieldspec
    f = propagate_scalar(code)
    ranks: dict[str, int] = {}
    failing = []
    decoders = {}
    for t in net.receivers:
        ins = sorted(net.in_edges(t), key=lambda e: e.id)
        rows = [[f[e.id][i] for e in ins] for i in range(net.omega)]
        r = _felt_rank(rows, spec)
        ranks[t] = r
        if r != net.omega:
            failing.append(t)
        else:
            decoders[t] = _felt_solve_right(rows, spec)
    return SolutionReport(not failing, net.omega, ranks, failing, decoders)


def simulate_decode_scalar(code: ScalarCode, trials: int, seed: int,
                           report: SolutionReport | None = None) -> dict:
    if report is None:
        report = is_solution_scalar(code)
    if not report.ok:
        raise InputError("simulate_decode needs a verified solution")
    net, spec = code.net, code.fieldspec
    omega = net.omega
    rng = random.Random(seed)
    explicit = _uses_source_rows(code)
    failures = 0
    for _ in range(trials):
        msg = [spec.from_int(rng.randrange(spec.q)) for _ in range(omega)]
        values: dict[int, Felt] = {}
        for idx, e in enumerate(net.source_edges()):
            if explicit:
                values[e.id] = sum(
                    (m * code.kernel(-1 - i, e.id) for i, m in enumerate(msg)), spec.zero()
                )
            else:
                values[e.id] = msg[idx]
        for e in net.edges:
            if e.tail == net.source:
                continue
            acc = spec.zero()
            for d in net.in_edges(e.tail):
                k = code.kernels.get((d.id, e.id))
                if k is not None and not k.is_zero():
                    acc = acc + values[d.id] * k
            values[e.id] = acc
        for t in net.receivers:
            ins = sorted(net.in_edges(t), key=lambda e: e.id)
            received = [values[e.id] for e in ins]
            d_t = report.decoders[t]
            decoded = [
                sum((received[i] * d_t[i][j] for i in range(len(ins))), spec.zero())
                for j in range(omega)
            ]
            if decoded != msg:
                failures += 1
    return {"trials": trials, "receivers": len(net.receivers), "failures": failures,
            "ok": failures == 0}


# ---------------------------------------------------------------------------
# Scalar -> vector transforms
# ---------------------------------------------------------------------------


def lift_scalar(code: ScalarCode) -> CodeAssignment:
    """Componentwise companion-matrix lift to a vector code of dimension k."""
    spec = code.fieldspec
    base = make_field(spec.p, 1)
    kernels = {pair: phi_lift(v) for pair, v in code.kernels.items()}
    return CodeAssignment(code.net, base, spec.k, kernels)


def lift_decoder(decoder: list[list[Felt]]) -> MatF:
    """Componentwise lift of a scalar decoding matrix."""
    return MatF.vstack([MatF.hstack([phi_lift(x) for x in row]) for row in decoder])


def direct_sum(codes: list[ScalarCode]) -> CodeAssignment:
    """Block-diagonal combination of scalar codes on the same network.

    The result is a vector code of dimension sum(k_i) over the shared
    characteristic; it is a solution whenever every summand is.
    """
    if not codes:
        raise InputError("direct sum of nothing")
    net = codes[0].net
    p = codes[0].fieldspec.p
    for c in codes[1:]:
        if c.net != net:
            raise InputError("direct sum needs identical networks")
        if c.fieldspec.p != p:
            raise InputError("direct sum needs a common base prime")
    dims = [c.fieldspec.k for c in codes]
    total = sum(dims)
    base = make_field(p, 1)
    pairs = set()
    for c in codes:
        pairs.update(c.kernels)
    kernels = {}
    for pair in pairs:
        blocks = []
        for c in codes:
            v = c.kernels.get(pair)
            blocks.append(phi_lift(v) if v is not None else MatF.zeros(p, c.fieldspec.k, c.fieldspec.k))
        kernels[pair] = MatF.block_diag(blocks)
    return CodeAssignment(net, base, total, kernels)


def random_scalar_code(net: Network, spec: FieldSpec, rng: random.Random) -> ScalarCode:
    """Uniformly random kernels on every adjacent pair (including source rows)."""
    kernels = {}
    for pair in adjacent_pairs(net):
        kernels[pair] = spec.from_int(rng.randrange(spec.q))
    return ScalarCode(net, spec, kernels)
