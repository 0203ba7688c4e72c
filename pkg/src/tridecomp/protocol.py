"""The triple-decomposition key-exchange protocols.

One session: Alice holds (a1, a2, a3) plus blinding conjugators (x1, x2),
Bob holds (b1, b2, b3) plus (y1, y2), each drawn from published subgroup
specs.  The public messages telescope,

    u = a1 c(x1, s1)                    p = c(b1, s1) c(y1, s2)
    v = c(x1^-1, s1) c(a2, s2) c(x2, s3)  q = c(y1^-1, s2) c(b2, s3) c(y2, s4)
    w = c(x2^-1, s3) c(a3, s4)            r = c(y2^-1, s4) b3

where c(g, s) = s g s^-1 and the public "slot" conjugators s1..s4 are the
identity in the plain variants.  Alice derives a1 p c(a2,s2) q c(a3,s4) r and
Bob derives u c(b1,s1) v c(b2,s3) w b3; under the generator-wise
commutativity requirements (a2 with y1, a3 with y2, b1 with x1, b2 with x2,
at the unconjugated level) both reduce to the same shared element.

Variants:

* ``plain``       - s1..s4 identity, all ten specs published;
* ``conjugated``  - random public s1..s4; the attacker-facing generating
  sets are the conjugated ones;
* ``centralizer`` - s identity, but each party publishes, for every private
  conjugator it holds, a generating set of a subgroup commuting with it; the
  peer draws the facing key parts from those published sets.  The
  conjugator sampling specs themselves stay private.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field, replace

from . import braids, groups
from .groups import (
    GroupElement,
    SubgroupSpec,
    band_spec,
    braid_identity,
    compose,
    compose_all,
    conjugate_left,
    commute,
    element_from_text,
    element_to_text,
    full_braid_spec,
    full_perm_spec,
    identity_like,
    invert,
    perm_block_spec,
    sample_word,
    spec_member,
)
from .linalg import BurauParams, DEFAULT_PRIME, DEFAULT_T0

PRESETS = (
    "GEN-12",
    "SUG-12",
    "CONJ-12",
    "P2-12",
    "GEN-6",
    "SUG-6",
    "CONJ-6",
    "P2-6",
    "PERM-9",
)

ALICE_SLOTS = ("a1", "a2", "a3", "x1", "x2")
BOB_SLOTS = ("b1", "b2", "b3", "y1", "y2")

# (left slot, right slot): every generator of the left sampling spec must
# commute with every generator of the right one for key agreement.
REQUIRED_COMMUTING = (("a2", "y1"), ("a3", "y2"), ("b1", "x1"), ("b2", "x2"))


class UnknownPreset(ValueError):
    pass


class ParameterViolation(ValueError):
    pass


@dataclass(frozen=True)
class ProtocolParams:
    platform: str  # "braid" | "permutation"
    variant: str  # "plain" | "conjugated" | "centralizer"
    n: int
    secret_length: int
    specs: dict[str, SubgroupSpec]  # sampling spec per slot name
    conjugators: tuple[GroupElement, GroupElement, GroupElement, GroupElement] | None = None
    preset: str | None = None
    params_seed: int = 0
    burau: BurauParams | None = None

    def spec(self, slot: str) -> SubgroupSpec:
        return self.specs[slot]

    def slot_conjugator(self, slot: str) -> GroupElement:
        """The public slot conjugator applied to this key part in messages."""
        e = self._identity()
        if self.conjugators is None:
            return e
        s1, s2, s3, s4 = self.conjugators
        return {
            "x1": s1, "b1": s1,
            "a2": s2, "y1": s2,
            "x2": s3, "b2": s3,
            "a3": s4, "y2": s4,
        }.get(slot, e)

    def _identity(self) -> GroupElement:
        return identity_like(self.specs["a1"].generators[0])

    def private_slots(self) -> frozenset[str]:
        """Slots whose sampling specs the attacker does not see."""
        if self.variant == "centralizer":
            return frozenset({"x1", "x2", "y1", "y2"})
        return frozenset()

    def attacker_spec(self, slot: str) -> SubgroupSpec:
        """The generating set an eavesdropper holds for this slot.

        For conjugated variants this is the published (slot-conjugated) set;
        asking for a private slot raises.
        """
        if slot in self.private_slots():
            raise ParameterViolation(f"slot {slot!r} is not published in this variant")
        spec = self.specs[slot]
        s = self.slot_conjugator(slot)
        if s.is_identity() or spec.band is None:
            return spec
        return groups.conjugated_band_spec(
            self.n, spec.band[0], spec.band[1], s, label=f"conj:{spec.label}"
        )

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(params_to_dict(self), sort_keys=True).encode()
        ).hexdigest()[:16]


@dataclass(frozen=True)
class AlicePrivate:
    a1: GroupElement
    a2: GroupElement
    a3: GroupElement
    x1: GroupElement
    x2: GroupElement


@dataclass(frozen=True)
class BobPrivate:
    b1: GroupElement
    b2: GroupElement
    b3: GroupElement
    y1: GroupElement
    y2: GroupElement


@dataclass(frozen=True)
class AliceMessage:
    u: GroupElement
    v: GroupElement
    w: GroupElement


@dataclass(frozen=True)
class BobMessage:
    p: GroupElement
    q: GroupElement
    r: GroupElement


@dataclass(frozen=True)
class Transcript:
    u: GroupElement
    v: GroupElement
    w: GroupElement
    p: GroupElement
    q: GroupElement
    r: GroupElement


@dataclass(frozen=True)
class SharedKey:
    key: GroupElement
    digest: str

    @staticmethod
    def of(key: GroupElement) -> "SharedKey":
        return SharedKey(key, _element_digest(key))


def _element_digest(x: GroupElement) -> str:
    if isinstance(x, groups.BraidElement):
        payload = f"braid|{x.n}|{x.nf.inf}|{x.nf.factors}"
    else:
        payload = f"perm|{x.n}|{x.images}"
    return hashlib.sha256(payload.encode()).hexdigest()


# ---------------------------------------------------------------------------
# presets


def _braid_params(
    n: int,
    variant: str,
    secret_length: int,
    bands: dict[str, tuple[int, int] | None],
    preset: str,
    seed: int,
    conj_length: int = 0,
) -> ProtocolParams:
    specs = {}
    for slot, band in bands.items():
        if band is None:
            specs[slot] = full_braid_spec(n, label=f"{slot}:full")
        else:
            specs[slot] = band_spec(n, band[0], band[1], label=f"{slot}:band{band}")
    conjugators = None
    if variant == "conjugated":
        full = full_braid_spec(n)
        rng = random.Random(seed ^ 0x5EED)
        conjugators = tuple(
            sample_word(full, conj_length, rng.randrange(2**32)) for _ in range(4)
        )
    return ProtocolParams(
        platform="braid",
        variant=variant,
        n=n,
        secret_length=secret_length,
        specs=specs,
        conjugators=conjugators,
        preset=preset,
        params_seed=seed,
        burau=BurauParams(n, DEFAULT_PRIME, DEFAULT_T0),
    )


def default_params(preset: str, seed: int = 0) -> ProtocolParams:
    """Named parameter sets; ``seed`` fixes the public slot conjugators."""
    if preset == "GEN-12":
        return _braid_params(
            12, "plain", 8,
            {
                "a1": None, "b3": None,
                "a2": (5, 8), "a3": (5, 8),
                "x1": (1, 4), "x2": (1, 4),
                "b1": (5, 12), "b2": (5, 12),
                "y1": (9, 12), "y2": (9, 12),
            },
            preset, seed,
        )
    if preset == "SUG-12":
        return _braid_params(
            12, "plain", 8,
            {
                "a1": None, "b3": None,
                "a2": (1, 4), "a3": (1, 4),
                "x1": (1, 4), "x2": (1, 4),
                "b1": (9, 12), "b2": (9, 12),
                "y1": (9, 12), "y2": (9, 12),
            },
            preset, seed,
        )
    if preset == "CONJ-12":
        return _braid_params(
            12, "conjugated", 6,
            {
                "a1": None, "b3": None,
                "a2": (1, 4), "a3": (1, 4),
                "x1": (1, 4), "x2": (1, 4),
                "b1": (9, 12), "b2": (9, 12),
                "y1": (9, 12), "y2": (9, 12),
            },
            preset, seed, conj_length=4,
        )
    if preset == "P2-12":
        return _braid_params(
            12, "centralizer", 8,
            {
                "a1": None, "b3": None,
                # facing key parts come from the peer's published commuting sets
                "a2": (1, 8), "a3": (1, 8),
                "b1": (5, 12), "b2": (5, 12),
                # private conjugator sampling bands
                "x1": (1, 4), "x2": (1, 4),
                "y1": (9, 12), "y2": (9, 12),
            },
            preset, seed,
        )
    if preset == "GEN-6":
        return _braid_params(
            6, "plain", 4,
            {
                "a1": None, "b3": None,
                "a2": (3, 4), "a3": (3, 4),
                "x1": (1, 2), "x2": (1, 2),
                "b1": (3, 6), "b2": (3, 6),
                "y1": (5, 6), "y2": (5, 6),
            },
            preset, seed,
        )
    if preset == "SUG-6":
        return _braid_params(
            6, "plain", 3,
            {
                "a1": None, "b3": None,
                "a2": (1, 2), "a3": (1, 2),
                "x1": (1, 2), "x2": (1, 2),
                "b1": (5, 6), "b2": (5, 6),
                "y1": (5, 6), "y2": (5, 6),
            },
            preset, seed,
        )
    if preset == "CONJ-6":
        return _braid_params(
            6, "conjugated", 3,
            {
                "a1": None, "b3": None,
                "a2": (1, 2), "a3": (1, 2),
                "x1": (1, 2), "x2": (1, 2),
                "b1": (5, 6), "b2": (5, 6),
                "y1": (5, 6), "y2": (5, 6),
            },
            preset, seed, conj_length=3,
        )
    if preset == "P2-6":
        return _braid_params(
            6, "centralizer", 4,
            {
                "a1": None, "b3": None,
                "a2": (1, 4), "a3": (1, 4),
                "b1": (3, 6), "b2": (3, 6),
                "x1": (1, 2), "x2": (1, 2),
                "y1": (5, 6), "y2": (5, 6),
            },
            preset, seed,
        )
    if preset == "PERM-9":
        specs = {
            "a1": full_perm_spec(9, "a1:full"),
            "b3": full_perm_spec(9, "b3:full"),
            "a2": perm_block_spec(9, 4, 6, "a2"),
            "a3": perm_block_spec(9, 4, 6, "a3"),
            "x1": perm_block_spec(9, 1, 3, "x1"),
            "x2": perm_block_spec(9, 1, 3, "x2"),
            "b1": perm_block_spec(9, 4, 9, "b1"),
            "b2": perm_block_spec(9, 4, 9, "b2"),
            "y1": perm_block_spec(9, 7, 9, "y1"),
            "y2": perm_block_spec(9, 7, 9, "y2"),
        }
        return ProtocolParams(
            platform="permutation",
            variant="plain",
            n=9,
            secret_length=6,
            specs=specs,
            preset="PERM-9",
            params_seed=seed,
        )
    raise UnknownPreset(f"unknown preset {preset!r}; known: {', '.join(PRESETS)}")


def validate_params(params: ProtocolParams) -> list[str]:
    """Generator-pairwise commutativity check; returns the violated pairs."""
    violations = []
    for left, right in REQUIRED_COMMUTING:
        ls, rs = params.specs[left], params.specs[right]
        for i, g in enumerate(ls.generators):
            for j, h in enumerate(rs.generators):
                if not commute(g, h):
                    violations.append(
                        f"{left}[{i}] does not commute with {right}[{j}]"
                    )
    return violations


# ---------------------------------------------------------------------------
# key generation and messages


def _slot_seed(master: random.Random) -> int:
    return master.randrange(2**63)


def keygen(side: str, params: ProtocolParams, seed: int) -> AlicePrivate | BobPrivate:
    """Draw one party's private key; deterministic per (side, params, seed)."""
    slots = ALICE_SLOTS if side == "alice" else BOB_SLOTS
    master = random.Random(("keygen", side, seed).__repr__())
    parts = {}
    for slot in slots:
        parts[slot] = sample_word(
            params.spec(slot), params.secret_length, _slot_seed(master)
        )
    if side == "alice":
        return AlicePrivate(**parts)
    return BobPrivate(**parts)


def build_message(
    side: str, priv: AlicePrivate | BobPrivate, params: ProtocolParams
) -> AliceMessage | BobMessage:
    c = lambda slot, g: conjugate_left(g, params.slot_conjugator(slot))
    if side == "alice":
        a = priv
        u = compose(a.a1, c("x1", a.x1))
        v = compose_all(c("x1", invert(a.x1)), c("a2", a.a2), c("x2", a.x2))
        w = compose(c("x2", invert(a.x2)), c("a3", a.a3))
        return AliceMessage(u, v, w)
    b = priv
    p = compose(c("b1", b.b1), c("y1", b.y1))
    q = compose_all(c("y1", invert(b.y1)), c("b2", b.b2), c("y2", b.y2))
    r = compose(c("y2", invert(b.y2)), b.b3)
    return BobMessage(p, q, r)


def derive_key(
    side: str,
    priv: AlicePrivate | BobPrivate,
    other: AliceMessage | BobMessage,
    params: ProtocolParams,
) -> SharedKey:
    c = lambda slot, g: conjugate_left(g, params.slot_conjugator(slot))
    if side == "alice":
        a, msg = priv, other
        key = compose_all(a.a1, msg.p, c("a2", a.a2), msg.q, c("a3", a.a3), msg.r)
    else:
        b, msg = priv, other
        key = compose_all(msg.u, c("b1", b.b1), msg.v, c("b2", b.b2), msg.w, b.b3)
    return SharedKey.of(key)


@dataclass(frozen=True)
class Session:
    """Harness-side bundle: params, both private keys, transcript and keys."""

    params: ProtocolParams
    alice: AlicePrivate
    bob: BobPrivate
    transcript: Transcript
    alice_key: SharedKey
    bob_key: SharedKey

    @property
    def key(self) -> SharedKey:
        return self.bob_key


def run_session(params: ProtocolParams, seed: int) -> Session:
    alice = keygen("alice", params, seed)
    bob = keygen("bob", params, seed ^ 0xB0B)
    amsg = build_message("alice", alice, params)
    bmsg = build_message("bob", bob, params)
    akey = derive_key("alice", alice, bmsg, params)
    bkey = derive_key("bob", bob, amsg, params)
    transcript = Transcript(amsg.u, amsg.v, amsg.w, bmsg.p, bmsg.q, bmsg.r)
    return Session(params, alice, bob, transcript, akey, bkey)


# ---------------------------------------------------------------------------
# serialisation


def _spec_to_dict(spec: SubgroupSpec) -> dict:
    return {
        "label": spec.label,
        "band": list(spec.band) if spec.band else None,
        "conjugator": element_to_text(spec.conjugator) if spec.conjugator else None,
        "generators": [element_to_text(g) for g in spec.generators],
    }


def params_to_dict(params: ProtocolParams) -> dict:
    return {
        "format": "tridecomp-params/1",
        "platform": params.platform,
        "variant": params.variant,
        "n": params.n,
        "preset": params.preset,
        "params_seed": params.params_seed,
        "secret_length": params.secret_length,
        "burau": (
            {"p": params.burau.p, "t0": params.burau.t0} if params.burau else None
        ),
        "specs": {slot: _spec_to_dict(s) for slot, s in sorted(params.specs.items())},
        "conjugators": (
            [element_to_text(s) for s in params.conjugators]
            if params.conjugators
            else None
        ),
    }


def transcript_to_dict(
    session: Session, include_honest: bool = True
) -> dict:
    params = session.params
    t = session.transcript
    doc = {
        "format": "tridecomp-transcript/1",
        "platform": params.platform,
        "n": params.n,
        "preset": params.preset,
        "params_seed": params.params_seed,
        "params_digest": params.digest(),
        "messages": {
            name: element_to_text(getattr(t, name)) for name in "uvwpqr"
        },
    }
    if include_honest:
        doc["honest"] = {
            "alice": {s: element_to_text(getattr(session.alice, s)) for s in ALICE_SLOTS},
            "bob": {s: element_to_text(getattr(session.bob, s)) for s in BOB_SLOTS},
            "key": element_to_text(session.key.key),
            "key_digest": session.key.digest,
        }
    return doc


def transcript_from_dict(doc: dict) -> tuple[Transcript, ProtocolParams, GroupElement | None]:
    """Rebuild (transcript, params, honest key or None) from a transcript document."""
    if doc.get("format") != "tridecomp-transcript/1":
        raise ValueError("not a transcript document")
    preset = doc["preset"]
    params = default_params(preset, seed=doc.get("params_seed", 0))
    digest = doc.get("params_digest")
    if digest and digest != params.digest():
        raise ValueError("transcript was made under different parameters")
    msgs = doc["messages"]
    elems = {
        name: element_from_text(params.platform, msgs[name], params.n)
        for name in "uvwpqr"
    }
    transcript = Transcript(**elems)
    honest_key = None
    if "honest" in doc and "key" in doc["honest"]:
        honest_key = element_from_text(params.platform, doc["honest"]["key"], params.n)
    return transcript, params, honest_key


def save_transcript(session: Session, path: str, include_honest: bool = True) -> None:
    with open(path, "w") as fh:
        json.dump(transcript_to_dict(session, include_honest), fh, indent=2)


def load_transcript(path: str) -> tuple[Transcript, ProtocolParams, GroupElement | None]:
    with open(path) as fh:
        return transcript_from_dict(json.load(fh))
