"""Executable algebraic identities behind the attack reductions.

Every identity is checked with known private keys on freshly generated
sessions: the left side uses only public data plus attacker probes, the right
side uses the private parts, and both must agree as canonical elements.  The
suite is what ``tridecomp verify`` runs, and what makes the reduction claims
falsifiable: corrupting any message or commutativity requirement makes at
least one identity fail.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .attack import compute_products, _probe_elements
from .groups import (
    GroupElement,
    commute,
    compose,
    compose_all,
    conjugate,
    conjugate_left,
    invert,
    sample_word,
    spec_member,
)
from .protocol import ProtocolParams, Session, default_params, run_session

PROBES_PER_IDENTITY = 2


def _specs_commute(params: ProtocolParams, left: str, right: str) -> bool:
    return all(
        commute(g, h)
        for g in params.spec(left).generators
        for h in params.spec(right).generators
    )


def identity_names(params: ProtocolParams) -> list[str]:
    """The identities applicable to this parameter set."""
    if params.variant == "conjugated":
        return [
            "conj-telescope-bob",
            "conj-telescope-alice",
            "conj-probe-b3",
            "conj-probe-b1",
            "conj-reconstruct-y2",
            "conj-reconstruct-y1",
            "conj-reconstruct-b2",
            "conj-shared-key-chain",
        ]
    names = [
        "telescope-bob",
        "telescope-alice",
        "probe-conj-b3",
        "probe-conj-b1",
        "probe-conj-a3",
        "probe-conj-a1",
        "product-probe-b3",
        "product-probe-b1",
        "reconstruct-y1",
        "reconstruct-y2",
        "reconstruct-b2",
        "reconstruct-b2-product",
        "reconstruct-a2",
        "key-product",
    ]
    # the second-stage identities need the extra commutativity of
    # suggested-style parameters
    if (
        _specs_commute(params, "a2", "b1")
        and _specs_commute(params, "a2", "b2")
        and _specs_commute(params, "a3", "b2")
    ):
        names += [
            "known-conj-a3",
            "known-conj-b1",
            "stage2-probe-a3",
            "stage2-probe-b1",
        ]
    return names


def check_session_identities(
    params: ProtocolParams, session_seed: int, probe_seed: int = 0
) -> list[tuple[str, bool]]:
    """Evaluate every applicable identity on one fresh session."""
    sess = run_session(params, session_seed)
    t = sess.transcript
    o1, o2 = compute_products(t)
    a, b = sess.alice, sess.bob
    results: list[tuple[str, bool]] = []

    def probes(slot: str, salt: int) -> list[GroupElement]:
        return _probe_elements(
            params.spec(slot), PROBES_PER_IDENTITY, 6, probe_seed ^ salt
        )

    if params.variant == "conjugated":
        s1 = params.slot_conjugator("b1")
        s2 = params.slot_conjugator("y1")
        s3 = params.slot_conjugator("b2")
        s4 = params.slot_conjugator("y2")
        cb1 = conjugate_left(b.b1, s1)
        cb2 = conjugate_left(b.b2, s3)
        results.append(
            ("conj-telescope-bob", o1 == compose_all(cb1, cb2, b.b3))
        )
        results.append(
            (
                "conj-telescope-alice",
                o2
                == compose_all(
                    a.a1, conjugate_left(a.a2, s2), conjugate_left(a.a3, s4)
                ),
            )
        )
        ok = True
        for h in probes("a3", 0x11):
            probe = conjugate_left(h, s4)
            lhs = compose_all(invert(o1), t.p, t.q, probe, t.r)
            ok = ok and lhs == conjugate(probe, b.b3)
        results.append(("conj-probe-b3", ok))
        ok = True
        for j in probes("a2", 0x12):
            probe = conjugate_left(j, s2)
            lhs = compose_all(t.p, probe, t.q, t.r, invert(o1))
            ok = ok and lhs == compose_all(cb1, probe, invert(cb1))
        results.append(("conj-probe-b1", ok))
        results.append(
            (
                "conj-reconstruct-y2",
                b.y2 == invert(conjugate(compose(t.r, invert(b.b3)), s4)),
            )
        )
        results.append(
            (
                "conj-reconstruct-y1",
                b.y1 == conjugate(compose(invert(cb1), t.p), s2),
            )
        )
        results.append(
            (
                "conj-reconstruct-b2",
                compose_all(
                    conjugate_left(b.y1, s2), t.q, conjugate_left(invert(b.y2), s4)
                )
                == cb2,
            )
        )
        chain = compose_all(
            a.a1,
            conjugate_left(a.x1, s1),
            cb1,
            conjugate_left(invert(a.x1), s1),
            conjugate_left(a.a2, s2),
            conjugate_left(a.x2, s3),
            cb2,
            conjugate_left(invert(a.x2), s3),
            conjugate_left(a.a3, s4),
            b.b3,
        )
        collapsed = compose_all(
            a.a1,
            conjugate_left(compose_all(a.x1, b.b1, invert(a.x1)), s1),
            conjugate_left(a.a2, s2),
            conjugate_left(compose_all(a.x2, b.b2, invert(a.x2)), s3),
            conjugate_left(a.a3, s4),
            b.b3,
        )
        results.append(
            (
                "conj-shared-key-chain",
                chain == sess.key.key and collapsed == sess.key.key,
            )
        )
        return results

    results.append(("telescope-bob", o1 == compose_all(b.b1, b.b2, b.b3)))
    results.append(("telescope-alice", o2 == compose_all(a.a1, a.a2, a.a3)))

    ok = True
    for j in probes("a3", 0x21):
        lhs = compose_all(invert(o1), t.p, t.q, j, t.r)
        ok = ok and lhs == conjugate(j, b.b3)
    results.append(("probe-conj-b3", ok))
    ok = True
    for T in probes("a2", 0x22):
        lhs = compose_all(t.p, T, t.q, t.r, invert(o1))
        ok = ok and lhs == compose_all(b.b1, T, invert(b.b1))
    results.append(("probe-conj-b1", ok))
    ok = True
    for j in probes("b2", 0x23):
        lhs = compose_all(invert(o2), t.u, t.v, j, t.w)
        ok = ok and lhs == conjugate(j, a.a3)
    results.append(("probe-conj-a3", ok))
    ok = True
    for T in probes("b1", 0x24):
        lhs = compose_all(t.u, T, t.v, t.w, invert(o2))
        ok = ok and lhs == compose_all(a.a1, T, invert(a.a1))
    results.append(("probe-conj-a1", ok))

    ok = True
    for j in probes("a3", 0x25):
        ok = ok and compose_all(t.p, t.q, j, t.r) == compose_all(b.b1, b.b2, j, b.b3)
    results.append(("product-probe-b3", ok))
    ok = True
    for T in probes("a2", 0x26):
        ok = ok and compose_all(t.p, T, t.q, t.r) == compose_all(b.b1, T, b.b2, b.b3)
    results.append(("product-probe-b1", ok))

    results.append(("reconstruct-y1", b.y1 == compose(invert(b.b1), t.p)))
    results.append(
        ("reconstruct-y2", invert(b.y2) == compose(t.r, invert(b.b3)))
    )
    results.append(
        (
            "reconstruct-b2",
            b.b2
            == compose_all(
                compose(invert(b.b1), t.p), t.q, compose(t.r, invert(b.b3))
            ),
        )
    )
    results.append(
        ("reconstruct-b2-product", b.b2 == compose_all(invert(b.b1), o1, invert(b.b3)))
    )
    results.append(
        (
            "reconstruct-a2",
            a.a2
            == compose_all(
                compose(invert(a.a1), t.u), t.v, compose(t.w, invert(a.a3))
            ),
        )
    )
    results.append(
        (
            "key-product",
            sess.key.key == compose_all(a.a1, b.b1, a.a2, b.b2, a.a3, b.b3),
        )
    )

    if "known-conj-a3" in identity_names(params):
        b1b2 = compose(o1, invert(b.b3))
        a2a3 = compose(invert(a.a1), o2)
        results.append(
            (
                "known-conj-a3",
                compose_all(invert(o2), a.a1, b1b2, invert(a.a1), o2)
                == conjugate(b1b2, a.a3),
            )
        )
        results.append(
            (
                "known-conj-b1",
                compose_all(b1b2, a2a3, invert(b1b2))
                == compose_all(b.b1, a2a3, invert(b.b1)),
            )
        )
        ok = True
        for v in probes("b1", 0x27):
            lhs = compose_all(invert(o2), a.a1, v, invert(a.a1), o2)
            ok = ok and lhs == conjugate(v, a.a3)
        results.append(("stage2-probe-a3", ok))
        ok = True
        for w in probes("a3", 0x28):
            lhs = compose_all(b1b2, w, invert(b1b2))
            ok = ok and lhs == compose_all(b.b1, w, invert(b.b1))
        results.append(("stage2-probe-b1", ok))
    return results


@dataclass
class VerifyReport:
    preset: str
    trials: int
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    per_identity: dict[str, int] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "format": "tridecomp-verify-report/1",
            "preset": self.preset,
            "trials": self.trials,
            "checks": self.checks,
            "failures": self.failures,
            "per_identity": self.per_identity,
            "all_passed": self.all_passed,
        }


def verify_preset(preset: str, trials: int, seed: int = 0) -> VerifyReport:
    """Run the identity suite on ``trials`` fresh sessions of a preset."""
    params = default_params(preset, seed)
    report = VerifyReport(preset=preset, trials=trials)
    for trial in range(trials):
        for name, ok in check_session_identities(
            params, session_seed=seed * 100003 + trial, probe_seed=seed + trial
        ):
            report.checks += 1
            report.per_identity[name] = report.per_identity.get(name, 0) + (1 if ok else 0)
            if not ok:
                report.failures.append(f"trial {trial}: {name}")
    return report
