"""Worked example: a unipotent automorphism of 3-space with no invariants beyond k[x].

The map is ``Phi(x, y, z) = (x, y(1 - xz) + Q^2/4 + z^4, z - (Q/2) x)`` with
``Q = x^2 y - z^2 - x z^3``.  Because ``Phi*(x) = x`` it restricts to a map Psi
of the (y, z)-plane over the field QQ(x), and the verification runs on both
presentations.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .classify import invariant_basis
from .endo import PolyMap, is_unipotent, jacobian_at
from .errors import BudgetExceeded, InputError
from .ideal import Ideal, fixpoint_ideal, ideals_equal, unique_fixpoint
from .linalg import SquareMatrix
from .poly import PolyRing
from .scalar import QQ, rational_functions

SUCCESS = "success"
FAILURE = "failure"
INCOMPLETE = "incomplete"

SCOPE_NOTE = (
    "Only polynomial invariants of total degree at most the stated bound are "
    "checked; rational invariants of unbounded degree are not covered."
)


def _q(X, Y, Z):
    return X ** 2 * Y - Z ** 2 - X * Z ** 3


def three_variable_map() -> PolyMap:
    R = PolyRing(QQ, ["x", "y", "z"])
    X, Y, Z = R.gens()
    Q = _q(X, Y, Z)
    return PolyMap(R, [X, Y * (1 - X * Z) + Q ** 2 / 4 + Z ** 4, Z - Q * X / 2])


def plane_map() -> PolyMap:
    """Psi on (y, z) with coefficients in QQ(x)."""
    S = PolyRing(rational_functions("x"), ["y", "z"])
    X = S.const(S.field.generator)
    Y, Z = S.gens()
    Q = _q(X, Y, Z)
    return PolyMap(S, [Y * (1 - X * Z) + Q ** 2 / 4 + Z ** 4, Z - Q * X / 2])


def expected_fixpoint_ideal(S: PolyRing) -> Ideal:
    X = S.const(S.field.generator)
    Y, Z = S.gens()
    Q = _q(X, Y, Z)
    return Ideal(S, [X * Q, 4 * Z ** 4 - 4 * X * Y * Z + Q ** 2])


@dataclass
class PoloniMoserReport:
    degree_bound: int
    ideal_equality: bool | None = None
    unique_fixpoint: bool | None = None
    jacobian: SquareMatrix | None = None
    unipotent: bool | None = None
    nonidentity_differential: bool | None = None
    jacobian_determinant: str | None = None
    invariant_bases: dict = dc_field(default_factory=dict)
    conclusion: str = INCOMPLETE
    error: str | None = None

    def invariants_are_powers_of_x(self) -> bool:
        for D, basis in self.invariant_bases.items():
            if [str(f) for f in basis] != _powers_of_x(D):
                return False
        return len(self.invariant_bases) == self.degree_bound

    def to_json(self) -> dict:
        jac = None
        if self.jacobian is not None:
            rows = self.jacobian.to_json()
            jac = {
                "rows_dF_i_dx_j": rows,
                "columns_dF_i_dx_j": self.jacobian.transpose().to_json(),
                "note": "rows list the partial derivatives of one coordinate; the second "
                        "form is its transpose, with the off-diagonal entry upper right",
            }
        return {
            "degree_bound": self.degree_bound,
            "ideal_equality": self.ideal_equality,
            "unique_fixpoint": self.unique_fixpoint,
            "jacobian": jac,
            "unipotent": self.unipotent,
            "nonidentity_differential": self.nonidentity_differential,
            "jacobian_determinant": self.jacobian_determinant,
            "invariant_bases": {str(D): [str(f) for f in b]
                                for D, b in sorted(self.invariant_bases.items())},
            "conclusion": self.conclusion,
            "scope": SCOPE_NOTE,
            "error": self.error,
        }


def _powers_of_x(D: int) -> list[str]:
    return ["1"] + ["x" if k == 1 else f"x^{k}" for k in range(1, D + 1)]


def run_poloni_moser(degree_bound: int = 6, **budgets) -> PoloniMoserReport:
    """Run the whole verification; a budget overrun yields a partial report.

    ``budgets`` (``max_pairs``, ``max_terms``) go to the Groebner computations.
    """
    if degree_bound < 1:
        raise InputError("degree bound must be at least 1")
    report = PoloniMoserReport(degree_bound)
    try:
        _run(report, budgets)
    except BudgetExceeded as exc:
        report.error = str(exc)
        report.conclusion = INCOMPLETE
        return report
    ok = (report.ideal_equality and report.unique_fixpoint and report.unipotent
          and report.nonidentity_differential and report.invariants_are_powers_of_x())
    report.conclusion = SUCCESS if ok else FAILURE
    return report


def _run(report: PoloniMoserReport, budgets: dict):
    Psi = plane_map()
    S = Psi.ring
    report.ideal_equality = ideals_equal(fixpoint_ideal(Psi), expected_fixpoint_ideal(S),
                                         **budgets)
    origin = [S.field.zero, S.field.zero]
    report.unique_fixpoint = unique_fixpoint(Psi, origin, **budgets)
    M = jacobian_at(Psi, origin)
    report.jacobian = M
    report.unipotent = is_unipotent(M)
    report.nonidentity_differential = not M.is_identity()

    Phi = three_variable_map()
    report.jacobian_determinant = str(Phi.jacobian_determinant())
    for D in range(1, report.degree_bound + 1):
        report.invariant_bases[D] = invariant_basis(Phi, D)
