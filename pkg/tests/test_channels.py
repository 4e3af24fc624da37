import json

import numpy as np
import pytest
import torch

from efcost.channels import (
    EbCertificate,
    HolevoTerm,
    QuantumChannel,
    antisymmetric_projector,
    check_povm,
    choi,
    design_second_moment,
    eb_certify,
    ensemble_residual,
    holevo_apply,
    holevo_ensemble,
    holevo_form,
    is_ppt,
    kraus_from_choi,
    mub_two_design,
    qubit_six_state,
    swap_operator,
    symmetric_projector,
    trace_out_map,
)
from efcost.linalg import DimSplit, max_abs_diff, outer, partial_trace, partial_transpose
from efcost.states import embed, random_coefficients, state_rng, subspace_basis
from efcost.utils.exceptions import ContractViolation, DimensionError, DomainError

DTYPE = torch.complex128


def _omega(d):
    vec = torch.zeros(d * d, dtype=DTYPE)
    for i in range(d):
        vec[i * d + i] = 1.0
    return vec / d ** 0.5


def _random_matrix(d, rng):
    return torch.from_numpy(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))


@pytest.mark.parametrize("example_id", [1, 2, 3, 4])
def test_trace_out_map_matches_partial_trace(example_id):
    basis = subspace_basis(example_id)
    channel = trace_out_map(basis)
    rng = state_rng(example_id)
    for _ in range(20):
        c = random_coefficients(basis.size, rng)
        psi = embed(c, basis)
        expected = partial_trace(outer(psi.vec), basis.ambient, keep="A")
        assert max_abs_diff(channel.apply(outer(c)), expected) < 1e-12


def test_choi_of_identity():
    assert max_abs_diff(choi(QuantumChannel.identity(3)).mat, outer(_omega(3))) < 1e-12


def test_choi_of_examples():
    j2 = choi(trace_out_map(subspace_basis(2))).mat
    assert max_abs_diff(j2, antisymmetric_projector(3) / 3) < 1e-12
    j3 = choi(trace_out_map(subspace_basis(3))).mat
    assert max_abs_diff(j3, torch.eye(4, dtype=DTYPE) / 3 - outer(_omega(2)) / 3) < 1e-12
    j4 = choi(trace_out_map(subspace_basis(4))).mat
    assert max_abs_diff(j4, symmetric_projector(3) / 6) < 1e-12


def test_partial_transpose_spectra_of_examples():
    j2 = choi(trace_out_map(subspace_basis(2)))
    res = is_ppt(j2)
    assert not res.passes
    assert res.min_eig == pytest.approx(-1 / 3, abs=1e-12)
    pt = partial_transpose(j2.mat, j2.split)
    assert (res.witness.conj() @ pt @ res.witness).real.item() == pytest.approx(-1 / 3, abs=1e-12)

    j3 = choi(trace_out_map(subspace_basis(3)))
    evals = torch.linalg.eigvalsh(partial_transpose(j3.mat, j3.split)).tolist()
    np.testing.assert_allclose(evals, [1 / 6, 1 / 6, 1 / 6, 1 / 2], atol=1e-12)
    assert is_ppt(j3).passes


def test_channel_rejects_bad_kraus():
    with pytest.raises(ContractViolation):
        QuantumChannel(2, 2, (torch.eye(2, dtype=DTYPE) * 2,))
    with pytest.raises(DimensionError):
        QuantumChannel(2, 3, (torch.eye(2, dtype=DTYPE),))
    with pytest.raises(DomainError):
        QuantumChannel(2, 2, ())
    with pytest.raises(DimensionError):
        QuantumChannel.identity(2).apply(torch.eye(3, dtype=DTYPE))


@pytest.mark.parametrize("example_id", [1, 2, 3, 4])
def test_kraus_round_trip(example_id):
    channel = trace_out_map(subspace_basis(example_id))
    j = choi(channel).mat
    again = QuantumChannel.from_choi(j, channel.din, channel.dout)
    assert max_abs_diff(choi(again).mat, j) < 1e-12
    rng = np.random.default_rng(example_id)
    x = _random_matrix(channel.din, rng)
    assert max_abs_diff(again.apply(x), channel.apply(x)) < 1e-11


def test_kraus_from_choi_rejects_non_psd():
    bad = torch.diag(torch.tensor([0.7, 0.5, -0.1, -0.1], dtype=DTYPE))
    with pytest.raises(ContractViolation):
        kraus_from_choi(bad, 2, 2)


def test_mub_overlaps():
    phis = mub_two_design(3)
    assert len(phis) == 12
    for i, a in enumerate(phis):
        for j, b in enumerate(phis):
            overlap = abs(a.inner(b)) ** 2
            if i == j:
                assert overlap == pytest.approx(1.0, abs=1e-12)
            elif i // 3 == j // 3:
                assert overlap == pytest.approx(0.0, abs=1e-12)
            else:
                assert overlap == pytest.approx(1 / 3, abs=1e-12)
    with pytest.raises(DomainError):
        mub_two_design(4)


def test_design_second_moments():
    assert max_abs_diff(design_second_moment(mub_two_design(3)), symmetric_projector(3) / 6) < 1e-12
    assert max_abs_diff(design_second_moment(qubit_six_state()), symmetric_projector(2) / 3) < 1e-12


def test_swap_and_projectors():
    swap = swap_operator(3)
    assert max_abs_diff(swap @ swap, torch.eye(9, dtype=DTYPE)) < 1e-15
    assert torch.trace(symmetric_projector(3)).real.item() == pytest.approx(6.0)
    assert torch.trace(antisymmetric_projector(3)).real.item() == pytest.approx(3.0)
    assert max_abs_diff(symmetric_projector(3) + antisymmetric_projector(3), torch.eye(9, dtype=DTYPE)) < 1e-15


@pytest.mark.parametrize("example_id", [1, 3, 4])
def test_holevo_form_reproduces_channel(example_id):
    form = holevo_form(example_id)
    check_povm(form)
    channel = trace_out_map(subspace_basis(example_id))
    rng = np.random.default_rng(10 + example_id)
    for _ in range(5):
        x = _random_matrix(channel.din, rng)
        assert max_abs_diff(holevo_apply(form, x), channel.apply(x)) < 1e-12
    assert ensemble_residual(holevo_ensemble(form), choi(channel).mat) < 1e-12


def test_holevo_form_errors():
    with pytest.raises(DomainError):
        holevo_form(2)
    with pytest.raises(DomainError):
        holevo_form(5)
    half = torch.eye(2, dtype=DTYPE) / 2
    with pytest.raises(DomainError):
        check_povm([HolevoTerm(half, half)])
    with pytest.raises(DomainError):
        check_povm([HolevoTerm(torch.diag(torch.tensor([2.0, 1.0], dtype=DTYPE)), half),
                    HolevoTerm(torch.diag(torch.tensor([-1.0, 0.0], dtype=DTYPE)), half)])
    with pytest.raises(DomainError):
        check_povm([])


@pytest.mark.parametrize(
    "example_id, verdict, method",
    [
        (1, "breaking", "ppt_2x2"),
        (2, "not_breaking", "ppt_violation"),
        (3, "breaking", "ppt_2x2"),
        (4, "breaking", "design_decomposition"),
    ],
)
def test_eb_certify_examples(example_id, verdict, method):
    cert = eb_certify(trace_out_map(subspace_basis(example_id)))
    assert cert.verdict == verdict
    assert cert.method == method
    if method == "design_decomposition":
        assert len(cert.ensemble) == 12
        assert cert.residual <= 1e-10
    if verdict == "not_breaking":
        assert cert.min_pt_eig == pytest.approx(-1 / 3, abs=1e-12)
        assert cert.witness is not None


@pytest.mark.parametrize("example_id", [1, 3, 4])
def test_eb_certify_with_holevo_form(example_id):
    cert = eb_certify(trace_out_map(subspace_basis(example_id)), holevo=holevo_form(example_id))
    assert cert.verdict == "breaking"
    assert cert.method == "holevo_form"
    assert cert.residual <= 1e-10


def test_mismatched_holevo_form_is_ignored():
    cert = eb_certify(trace_out_map(subspace_basis(1)), holevo=holevo_form(3))
    assert cert.method == "ppt_2x2"


def test_eb_certify_indeterminate():
    depolarizing = QuantumChannel.from_choi(torch.eye(9, dtype=DTYPE) / 9, 3, 3)
    cert = eb_certify(depolarizing)
    assert cert.verdict == "indeterminate"
    assert cert.method is None
    assert not cert.is_breaking


def test_eb_certify_design_near_symmetric_choi():
    j = symmetric_projector(3) / 6
    j[0, 4] += 5e-9
    j[4, 0] += 5e-9
    cert = eb_certify(QuantumChannel.from_choi(j, 3, 3))
    assert cert.verdict == "breaking"
    assert cert.method == "design_decomposition"
    assert cert.residual <= 1e-10
    assert cert.choi_distance == pytest.approx(5e-9, rel=1e-3)
    assert cert.to_dict()["choi_distance"] == cert.choi_distance


def test_eb_certify_far_from_symmetric_choi_is_indeterminate():
    j = symmetric_projector(3) / 6
    j[0, 4] += 1e-6
    j[4, 0] += 1e-6
    assert eb_certify(QuantumChannel.from_choi(j, 3, 3)).verdict == "indeterminate"


@pytest.mark.parametrize("example_id", [1, 2, 3, 4])
def test_eb_certify_stable_under_choi_rebuild(example_id):
    ch = trace_out_map(subspace_basis(example_id))
    rebuilt = QuantumChannel.from_choi(choi(ch).mat, ch.din, ch.dout)
    direct, again = eb_certify(ch), eb_certify(rebuilt)
    assert again.verdict == direct.verdict
    assert again.method == direct.method


def test_eb_certify_identity_is_not_breaking():
    cert = eb_certify(QuantumChannel.identity(2))
    assert cert.verdict == "not_breaking"
    assert cert.min_pt_eig == pytest.approx(-0.5, abs=1e-12)


def test_certificate_invariants():
    split = DimSplit(2, 2)
    with pytest.raises(DomainError):
        EbCertificate("maybe", None, 0.0, split)
    with pytest.raises(ContractViolation):
        EbCertificate("not_breaking", "ppt_violation", 0.1, split)
    with pytest.raises(ContractViolation):
        EbCertificate("breaking", "holevo_form", 0.1, split)


def test_certificate_to_dict_is_json():
    cert = eb_certify(trace_out_map(subspace_basis(4)))
    doc = json.loads(json.dumps(cert.to_dict()))
    assert doc["verdict"] == "breaking"
    assert doc["dims"] == [3, 3]
    assert len(doc["ensemble"]) == 12
    assert doc["witness"] is None


def test_every_example_choi_is_a_state(example_bases):
    for basis in example_bases.values():
        j = choi(trace_out_map(basis)).mat
        assert torch.trace(j).real.item() == pytest.approx(1.0, abs=1e-12)
        assert torch.linalg.eigvalsh(j).min().item() >= -1e-9
