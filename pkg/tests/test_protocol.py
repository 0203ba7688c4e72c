import dataclasses
import json

import pytest

from tridecomp.braids import parabolic_support
from tridecomp.groups import (
    band_spec,
    braid_identity,
    compose,
    compose_all,
    conjugate_left,
    commute,
    invert,
    sample_word,
)
from tridecomp.protocol import (
    PRESETS,
    AliceMessage,
    BobMessage,
    ProtocolParams,
    Transcript,
    UnknownPreset,
    build_message,
    default_params,
    derive_key,
    keygen,
    run_session,
    transcript_from_dict,
    transcript_to_dict,
    validate_params,
)

SESSION_PRESETS = ["GEN-12", "SUG-12", "CONJ-12", "P2-12", "GEN-6", "PERM-9"]


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        default_params("X")


@pytest.mark.parametrize("preset", PRESETS)
def test_presets_validate(preset):
    assert validate_params(default_params(preset, seed=1)) == []


def test_validator_reports_violations():
    # forcing the facing specs onto the same band breaks commutativity
    params = default_params("GEN-12", 0)
    bad_specs = dict(params.specs)
    bad_specs["a2"] = band_spec(12, 1, 4)
    bad_specs["y1"] = band_spec(12, 1, 4)
    bad = dataclasses.replace(params, specs=bad_specs)
    violations = validate_params(bad)
    assert violations and any("a2" in v and "y1" in v for v in violations)


@pytest.mark.parametrize("preset", SESSION_PRESETS)
def test_sessions_agree(preset):
    params = default_params(preset, seed=2)
    for seed in range(10):
        sess = run_session(params, seed)
        assert sess.alice_key == sess.bob_key
        assert sess.alice_key.digest == sess.bob_key.digest


def test_key_formula_plain():
    params = default_params("GEN-12", 0)
    sess = run_session(params, 5)
    a, b = sess.alice, sess.bob
    assert sess.key.key == compose_all(a.a1, b.b1, a.a2, b.b2, a.a3, b.b3)


def test_telescoping_plain():
    params = default_params("GEN-6", 0)
    for seed in range(5):
        sess = run_session(params, seed)
        t, b, a = sess.transcript, sess.bob, sess.alice
        assert compose_all(t.p, t.q, t.r) == compose_all(b.b1, b.b2, b.b3)
        assert compose_all(t.u, t.v, t.w) == compose_all(a.a1, a.a2, a.a3)


def test_telescoping_conjugated():
    params = default_params("CONJ-12", 3)
    s1, s2, s3, s4 = params.conjugators
    sess = run_session(params, 1)
    t, b, a = sess.transcript, sess.bob, sess.alice
    assert compose_all(t.p, t.q, t.r) == compose_all(
        conjugate_left(b.b1, s1), conjugate_left(b.b2, s3), b.b3
    )
    assert compose_all(t.u, t.v, t.w) == compose_all(
        a.a1, conjugate_left(a.a2, s2), conjugate_left(a.a3, s4)
    )


def test_conjugated_with_identity_slots_equals_plain():
    p_conj = default_params("CONJ-12", 0)
    e = braid_identity(12)
    p_id = dataclasses.replace(p_conj, conjugators=(e, e, e, e))
    p_plain = dataclasses.replace(
        default_params("SUG-12", 0), secret_length=p_conj.secret_length
    )
    bob = keygen("bob", p_id, 9)
    assert bob == keygen("bob", p_plain, 9)
    assert build_message("bob", bob, p_id) == build_message("bob", bob, p_plain)


def test_zero_length_secrets_give_identity_everything():
    params = dataclasses.replace(default_params("GEN-6", 0), secret_length=0)
    sess = run_session(params, 0)
    assert sess.key.key.is_identity()
    for name in "uvwpqr":
        assert getattr(sess.transcript, name).is_identity()


def test_keygen_determinism_and_membership():
    params = default_params("GEN-12", 0)
    assert keygen("bob", params, 4) == keygen("bob", params, 4)
    assert keygen("bob", params, 4) != keygen("bob", params, 5)
    bob = keygen("bob", params, 4)
    assert parabolic_support(bob.b1.nf) <= frozenset(range(5, 13))
    assert parabolic_support(bob.y1.nf) <= frozenset(range(9, 13))


def test_p2_keys_commute_with_owning_conjugators():
    params = default_params("P2-12", 0)
    for seed in range(5):
        alice = keygen("alice", params, seed)
        bob = keygen("bob", params, seed ^ 0xB0B)
        # parts drawn from a published commuting set do commute with the
        # conjugators that set was published for
        assert commute(alice.a2, bob.y1)
        assert commute(alice.a3, bob.y2)
        assert commute(bob.b1, alice.x1)
        assert commute(bob.b2, alice.x2)


def test_p2_private_slots_hidden_from_attacker():
    params = default_params("P2-12", 0)
    assert params.private_slots() == {"x1", "x2", "y1", "y2"}
    with pytest.raises(Exception):
        params.attacker_spec("y1")
    # published slots are fine
    assert params.attacker_spec("a2").label


def test_conjugated_attacker_spec_is_conjugated():
    params = default_params("CONJ-12", 5)
    spec = params.attacker_spec("b1")
    assert spec.conjugator == params.conjugators[0]
    base = params.spec("b1")
    for g, h in zip(spec.generators, base.generators):
        assert g == conjugate_left(h, params.conjugators[0])


def test_transcript_roundtrip_and_digest_check():
    sess = run_session(default_params("CONJ-6", 2), 11)
    doc = json.loads(json.dumps(transcript_to_dict(sess)))
    t, params, honest = transcript_from_dict(doc)
    assert t == sess.transcript
    assert honest == sess.key.key
    assert params.digest() == doc["params_digest"]
    # tampered digest is rejected
    doc["params_digest"] = "0" * 16
    with pytest.raises(ValueError, match="different parameters"):
        transcript_from_dict(doc)


def test_transcript_without_honest_block():
    sess = run_session(default_params("GEN-6", 0), 3)
    doc = transcript_to_dict(sess, include_honest=False)
    assert "honest" not in doc
    t, params, honest = transcript_from_dict(doc)
    assert honest is None and t == sess.transcript


def test_session_determinism():
    a = run_session(default_params("GEN-6", 0), 4)
    b = run_session(default_params("GEN-6", 0), 4)
    assert a.key == b.key and a.transcript == b.transcript
