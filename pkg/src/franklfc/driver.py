"""End-to-end classification of a generator family as FC or Non-FC.

The cutting-plane loop alternates an exact LP feasibility probe over the
weight polytope with the separation oracle: a feasible rational point is
scaled to integer weights and handed to the oracle; a violating family
becomes a new cut; an empty separation proves the weights certify FC; an
empty polytope yields a Farkas certificate proving Non-FC.  Both outcomes
carry certificates that can be re-checked from scratch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .families import (
    ParseError,
    SetFamily,
    UCFamily,
    elements_of,
    union_closure,
)
from .masterlp import CutRow, FarkasCertificate, MasterPolytope
from .rationals import (
    check_weight_vector,
    fraction_from_str,
    fraction_to_str,
    scale_to_integer,
)
from .separation import SeparationProblem, check_violator, separate

MAX_ITERATIONS = 10000


class IterationLimitError(RuntimeError):
    """The cutting-plane loop failed to settle; carries the loop state."""

    def __init__(self, message, state):
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class Certificate:
    verdict: str  # "FC" | "NonFC"
    n: int
    relabeling: dict[int, int]  # original element -> normalized element
    generator: SetFamily  # as given, original labels
    closure: UCFamily  # normalized, with the empty set adjoined
    weights: tuple[int, ...] | None = None
    attestation: dict | None = None
    cut_families: tuple[UCFamily, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None
    iterations: int = 0

    def to_json_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "n": self.n,
            "relabeling": {str(k): v for k, v in sorted(self.relabeling.items())},
            "generator": self.generator.to_json_dict(),
            "iterations": self.iterations,
        }
        if self.verdict == "FC":
            out["certificate"] = {
                "type": "fc",
                "family": self.closure.to_json_dict(),
                "weights": list(self.weights),
                "attestation": dict(self.attestation),
            }
        else:
            out["certificate"] = {
                "type": "nonfc",
                "family": self.closure.to_json_dict(),
                "cut_families": [b.to_json_dict() for b in self.cut_families],
                "farkas": [fraction_to_str(x) for x in self.farkas],
            }
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "Certificate":
        try:
            verdict = data["verdict"]
            cert = data["certificate"]
            closure = UCFamily.from_json_dict(cert["family"])
            common = {
                "verdict": verdict,
                "n": int(data["n"]),
                "relabeling": {int(k): int(v) for k, v in data["relabeling"].items()},
                "generator": SetFamily.from_json_dict(data["generator"]),
                "closure": closure,
                "iterations": int(data.get("iterations", 0)),
            }
            if verdict == "FC":
                return cls(
                    weights=tuple(int(x) for x in cert["weights"]),
                    attestation=dict(cert["attestation"]),
                    **common,
                )
            if verdict == "NonFC":
                return cls(
                    cut_families=tuple(
                        UCFamily.from_json_dict(b) for b in cert["cut_families"]
                    ),
                    farkas=tuple(fraction_from_str(x) for x in cert["farkas"]),
                    **common,
                )
            raise ParseError(f"unknown verdict {verdict!r}")
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad certificate JSON: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad certificate JSON: {exc}") from exc
        return cls.from_json_dict(data)


def normalize(generator: SetFamily) -> tuple[UCFamily, dict[int, int]]:
    """Relabel used elements onto [n], close under union, adjoin the empty set.

    Returns the normalized family and the original->new element map.
    """
    if not generator.members:
        raise ValueError("cannot classify an empty family")
    if generator.members == (0,):
        raise ValueError("cannot classify the family containing only {}")
    used = elements_of(generator.union_mask())
    relabel = {e: i + 1 for i, e in enumerate(used)}
    n = len(used)
    remapped = []
    for s in generator.members:
        t = 0
        for e in elements_of(s):
            t |= 1 << (relabel[e] - 1)
        remapped.append(t)
    closed = union_closure(SetFamily(n, tuple(remapped)))
    return UCFamily(n, closed.members + (0,)), relabel


def classify(generator: SetFamily, max_iterations: int = MAX_ITERATIONS) -> Certificate:
    """Decide FC / Non-FC with a re-checkable certificate."""
    family, relabel = normalize(generator)
    n = family.n
    polytope = MasterPolytope(n)
    for iteration in range(1, max_iterations + 1):
        point = polytope.find_point()
        if point is None:
            farkas = polytope.extract_farkas()
            active = [
                (cut, lam)
                for cut, lam in zip(polytope.cuts, farkas.multipliers)
                if lam != 0
            ]
            cert = Certificate(
                verdict="NonFC",
                n=n,
                relabeling=relabel,
                generator=generator,
                closure=family,
                cut_families=tuple(cut.source for cut, _ in active),
                farkas=tuple(lam for _, lam in active),
                iterations=iteration,
            )
            assert verify_certificate(cert)
            return cert
        weights = scale_to_integer(point)
        outcome = separate(SeparationProblem(family, weights))
        if outcome.empty:
            return Certificate(
                verdict="FC",
                n=n,
                relabeling=relabel,
                generator=generator,
                closure=family,
                weights=weights,
                attestation=outcome.attestation,
                iterations=iteration,
            )
        violator = outcome.violator
        # The new cut must be violated at the point that produced it.
        row = CutRow.from_family(violator)
        slack = sum(Fraction(d) * y for d, y in zip(row.coefficients, point))
        assert slack < 0, "separation returned a non-violated cut"
        polytope.add_cut(violator)
    raise IterationLimitError(
        f"no verdict after {max_iterations} iterations",
        state={
            "generator": generator.to_json_dict(),
            "cuts": [c.source.to_json_dict() for c in polytope.cuts],
        },
    )


def check_weights(family: UCFamily, weights) -> bool:
    """Direct one-shot FC test: do these weights make the separation empty?

    True proves the family is FC; False only means these particular weights
    do not certify it.
    """
    c = check_weight_vector(weights, family.n)
    return separate(SeparationProblem(family, c)).empty


def verify_certificate(cert: Certificate) -> bool:
    """Re-check a certificate from scratch, independent of how it was made."""
    try:
        family, relabel = normalize(cert.generator)
    except ValueError:
        return False
    if relabel != cert.relabeling or family.n != cert.n:
        return False
    if family.members != cert.closure.members:
        return False
    if cert.verdict == "FC":
        try:
            weights = check_weight_vector(cert.weights, cert.n)
        except ValueError:
            return False
        return separate(SeparationProblem(family, weights)).empty
    if cert.verdict != "NonFC":
        return False
    if not cert.cut_families or cert.farkas is None:
        return False
    if len(cert.cut_families) != len(cert.farkas):
        return False
    problem = SeparationProblem(family, (1,) * cert.n)
    rows = []
    for b in cert.cut_families:
        # Each cut source must be a genuine absorbed union-closed family.
        if b.n != cert.n or not b.members:
            return False
        if not check_violator_structure(problem, b):
            return False
        rows.append(CutRow.from_family(b))
    return FarkasCertificate(cert.farkas).refutes(rows)


def check_violator_structure(problem: SeparationProblem, family: UCFamily) -> bool:
    """Union-closure and absorption only (no weight requirement)."""
    present = set(family.members)
    for i, s in enumerate(family.members):
        for t in family.members[i + 1:]:
            if s | t not in present:
                return False
        for a in problem.family.members:
            if s | a not in present:
                return False
    return True


def classification_trace(generator: SetFamily, max_iterations: int = MAX_ITERATIONS):
    """Like classify(), but also return per-iteration (point, cut, slack).

    Used to assert the loop invariant that every added cut was strictly
    violated at the rational point that produced it.
    """
    family, _ = normalize(generator)
    polytope = MasterPolytope(family.n)
    trace = []
    for _ in range(max_iterations):
        point = polytope.find_point()
        if point is None:
            return classify(generator, max_iterations), trace
        weights = scale_to_integer(point)
        outcome = separate(SeparationProblem(family, weights))
        if outcome.empty:
            return classify(generator, max_iterations), trace
        row = CutRow.from_family(outcome.violator)
        slack = sum(Fraction(d) * y for d, y in zip(row.coefficients, point))
        trace.append((point, outcome.violator, slack))
        assert check_violator(SeparationProblem(family, weights), outcome.violator)
        polytope.add_cut(outcome.violator)
    raise IterationLimitError("no verdict", state={})
