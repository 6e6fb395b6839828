import dataclasses

import pytest

from gfregular.core.errors import FieldMismatchError, PreconditionError
from gfregular.core.field import field_of_order, tower
from gfregular.core.geometry import bar_matrix, pg_matrix, verify_obstruction
from gfregular.core.linalg import Mat, hstack
from gfregular.core.regularity import (
    BadnessCertificate,
    EmbeddingCertificate,
    decide_structure,
    embed_certificate,
    l_decomposition,
    o_minor_from_bad,
    q_badness,
    verify_certificate,
)
from gfregular.core.types import FamilyKind, Verdict
from gfregular.shell.services.suite_service import decide_instance

W = tower(2).field.omega


def decide(columns, t):
    a, g = decide_instance(columns, t, 2)
    return a, g, decide_structure(hstack([a, g]), g.label_list())


def test_l_decomposition():
    a, _ = decide_instance([(1, W, 0), (1, 1, 0), (0, 0, 0)], 3, 2)
    assert l_decomposition(a).dims() == {"y1": 2, "y2": 1, "y3": 0}
    assert l_decomposition(a).full() == ("y1",)


def test_triple_is_bad():
    columns = [(1, W, 0), (0, 1, W), (1, 0, W)]
    a, g = decide_instance(columns, 3, 2)
    cert = q_badness(a, g)
    assert cert is not None
    assert cert.z == ("y1", "y2", "y3") and not cert.strong
    assert verify_certificate(a, g, cert)
    (minor,) = o_minor_from_bad(a, g, cert)
    assert minor.kind == "plane"
    assert minor.minor.size == 10 and minor.minor.rank() == 3


def test_strong_pair_at_rank_four():
    a, g, decision = decide([(1, W, 0, 0), (0, 0, 1, W)], 4)
    assert decision.verdict == Verdict.BAD
    assert decision.certificate.z == ("y1", "y2")
    assert decision.certificate.strong
    assert decision.outside_moreover
    assert [o.kind for o in decision.obstructions] == ["strong"]
    for o in decision.obstructions:
        verify_obstruction(o.minor, o.report.x_labels)


def test_strong_pair_at_rank_five_has_two_minors():
    _, _, decision = decide([(1, W, 0, 0, 0), (0, 0, 1, W, 0)], 5)
    assert decision.verdict == Verdict.BAD
    assert not decision.outside_moreover
    assert [o.kind for o in decision.obstructions] == ["strong", "moreover"]
    assert all(o.minor.rank() == 3 for o in decision.obstructions)


def test_shared_line_lands_in_hat():
    a, g, decision = decide([(W, 1, 0), (W, 0, 1)], 3)
    assert decision.verdict == Verdict.HAT
    cert = decision.certificate
    assert isinstance(cert, EmbeddingCertificate)
    assert cert.target == FamilyKind.HAT
    assert verify_certificate(a, g, cert)
    assert q_badness(a, g) is None


def test_no_extension_columns_is_hat():
    _, _, decision = decide([], 3)
    assert decision.verdict == Verdict.HAT
    assert decision.obstructions == ()


def test_bar_family_lands_in_bar():
    family = bar_matrix(3, 2)
    decision = decide_structure(family.mat, family.pg_labels())
    assert decision.verdict == Verdict.BAR
    assert decision.certificate.target == FamilyKind.BAR
    report = decision.to_report()
    assert report["verdict"] == "BAR" and report["verified"]


def test_embedding_certificate_directly():
    a, g = decide_instance([(1, 1, 0), (0, W, W)], 3, 2)
    cert = embed_certificate(a, g)
    assert set(cert.injection) == set(a.label_list()) | set(g.label_list())


def test_tampered_certificates_are_rejected():
    a, g = decide_instance([(1, W, 0), (0, 1, W), (1, 0, W)], 3, 2)
    cert = q_badness(a, g)
    assert not verify_certificate(a, g, BadnessCertificate(cert.z[:2], cert.subspaces[:2]))
    assert not verify_certificate(a, g, BadnessCertificate(("y1", "y1"), cert.subspaces[:2]))

    a, g = decide_instance([(W, 1, 0), (W, 0, 1)], 3, 2)
    good = embed_certificate(a, g)
    label = next(iter(good.scalars))
    field = a.field
    scalars = dict(good.scalars)
    scalars[label] = int(field.mul(scalars[label], field.omega))
    assert not verify_certificate(a, g, dataclasses.replace(good, scalars=scalars))
    assert not verify_certificate(a, g, dataclasses.replace(good, target=FamilyKind.BAR))


def test_input_checks():
    a, g = decide_instance([(1, W)], 2, 2)
    with pytest.raises(PreconditionError):
        q_badness(a, g)
    with pytest.raises(FieldMismatchError):
        q_badness(Mat.identity(field_of_order(4), 3), pg_matrix(3, 2).mat)
    a, _ = decide_instance([(1, W, 0)], 3, 2)
    with pytest.raises(PreconditionError):
        q_badness(a, pg_matrix(4, 2).mat)
    with pytest.raises(FieldMismatchError):
        q_badness(a, pg_matrix(3, 3).mat)
    small = pg_matrix(2, 2, over=tower(2).field)
    with pytest.raises(PreconditionError):
        decide_structure(small.mat, small.labels)
    w = hstack([a, pg_matrix(3, 2, over=tower(2).field).mat])
    with pytest.raises(PreconditionError):
        decide_structure(w, ["p1", "p2", "p3"])
