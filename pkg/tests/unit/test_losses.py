"""
Unit tests for the loss kernels.

Covers the contrastive loss against a naive oracle, pair masks,
cross-entropy, L1, Dice, the composite objective and gradient checks.
"""

import numpy as np
import pytest

from gridcodec import Axis, GridSpec, sharpened_softmax
from losses import (
    FeatureBatch,
    FeatureMeta,
    LossTargets,
    LossWeights,
    ModelOutputs,
    build_accessory_mask,
    build_dataset_mask,
    build_pitch_mask,
    ce_from_logits,
    ce_loss,
    composite_loss,
    dice_loss,
    dice_loss_and_grad,
    grad_check,
    l1_loss,
    supcon_loss,
    supcon_raw,
)
from utils.exceptions import DataValidationError, InvariantViolationError

pytestmark = pytest.mark.unit


def naive_supcon(z, mask, tau):
    """Direct triple loop over anchors, positives and the denominator."""
    n = len(z)
    total = 0.0
    for i in range(n):
        positives = [p for p in range(n) if p != i and mask[i, p]]
        if not positives:
            continue
        denom = sum(np.exp(z[i] @ z[q] / tau) for q in range(n) if q != i)
        acc = 0.0
        for p in positives:
            acc += np.log(np.exp(z[i] @ z[p] / tau) / denom)
        total += -acc / len(positives)
    return total


def random_mask(rng, n, density=0.4):
    upper = np.triu(rng.random((n, n)) < density, k=1)
    return upper | upper.T


def meta_rows(pitches, **kwargs):
    return [FeatureMeta(sample_id=str(i), pitch=p, yaw=0.0, **kwargs) for i, p in enumerate(pitches)]


class TestSupCon:
    """Test cases for the supervised contrastive loss."""

    def test_identical_pair_is_zero(self):
        """Test two identical mutual positives give zero loss."""
        z = np.array([[1.0, 0.0], [1.0, 0.0]])
        mask = np.array([[False, True], [True, False]])
        loss, _ = supcon_raw(z, mask, 0.07)
        assert loss == pytest.approx(0.0, abs=1e-12)

    def test_no_positives_is_zero(self):
        """Test an all-false mask gives zero loss and gradient."""
        z = np.random.default_rng(0).normal(size=(4, 3))
        loss, grad = supcon_raw(z, np.zeros((4, 4), bool))
        assert loss == 0.0
        assert not grad.any()

    def test_matches_naive_oracle(self):
        """Test 200 random batches against the triple-loop oracle."""
        rng = np.random.default_rng(1)
        for _ in range(200):
            n, d = rng.integers(2, 9), rng.integers(1, 7)
            z = rng.normal(size=(n, d))
            z /= np.linalg.norm(z, axis=1, keepdims=True)
            mask = random_mask(rng, n)
            tau = rng.uniform(0.05, 1.0)
            loss, _ = supcon_raw(z, mask, tau)
            assert loss == pytest.approx(naive_supcon(z, mask, tau), rel=1e-9, abs=1e-12)

    def test_rotation_invariance(self):
        """Test a shared orthogonal rotation leaves the loss unchanged."""
        rng = np.random.default_rng(2)
        z = rng.normal(size=(6, 4))
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
        mask = random_mask(rng, 6, 0.6)
        a, _ = supcon_raw(z, mask)
        b, _ = supcon_raw(z @ q.T, mask)
        assert a == pytest.approx(b, abs=1e-9)

    def test_batch_wrapper(self):
        """Test the FeatureBatch entry point agrees with the raw one."""
        rng = np.random.default_rng(3)
        raw = rng.normal(size=(5, 3))
        batch = FeatureBatch.from_raw(raw, meta_rows([0.0] * 5))
        mask = random_mask(rng, 5, 0.8)
        assert supcon_loss(batch, mask)[0] == pytest.approx(supcon_raw(raw, mask)[0])

    def test_single_row_rejected(self):
        """Test N < 2 is rejected."""
        with pytest.raises(DataValidationError):
            supcon_raw(np.ones((1, 3)), np.zeros((1, 1), bool))

    def test_asymmetric_mask_rejected(self):
        """Test invalid masks are rejected."""
        mask = np.array([[False, True], [False, False]])
        with pytest.raises(InvariantViolationError):
            supcon_raw(np.eye(2), mask)

    def test_gradient(self):
        """Test the analytic gradient on 50 random N=5, d=3 batches."""
        rng = np.random.default_rng(4)
        for _ in range(50):
            v = rng.normal(size=(5, 3))
            mask = random_mask(rng, 5, 0.5)
            err = grad_check(lambda x: supcon_raw(x, mask, 0.07), v, h=1e-5)
            assert err < 1e-4


class TestPairMasks:
    """Test cases for positive-pair mask builders."""

    def test_pitch_mask(self):
        """Test pitches (0, 3, 10) with s=4 pair only the first two."""
        batch = FeatureBatch.labels_only(meta_rows([0.0, 3.0, 10.0]))
        m = build_pitch_mask(batch, 4.0)
        expected = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=bool)
        assert np.array_equal(m, expected)

    def test_pitch_mask_equal_and_single(self):
        """Test equal pitches form a complete graph; one row is empty."""
        m = build_pitch_mask(FeatureBatch.labels_only(meta_rows([1.0] * 4)), 4.0)
        assert m.sum() == 12
        single = build_pitch_mask(FeatureBatch.labels_only(meta_rows([1.0])), 4.0)
        assert not single.any()

    def test_dataset_mask(self):
        """Test cross-dataset same-bin pairs are positive."""
        meta = [
            FeatureMeta("a", dataset_id="X", pitch=1.0, yaw=1.0),
            FeatureMeta("b", dataset_id="N", pitch=1.5, yaw=0.5),
            FeatureMeta("c", dataset_id="X", pitch=1.2, yaw=1.1),
            FeatureMeta("d", dataset_id="C", pitch=-20.0, yaw=1.0),
        ]
        m = build_dataset_mask(FeatureBatch.labels_only(meta), GridSpec())
        assert m[0, 1] and m[1, 2]
        assert not m[0, 2]  # same dataset
        assert not m[0, 3]  # different bin

    def test_accessory_mask(self):
        """Test views of one sample with differing flags are positive."""
        meta = [
            FeatureMeta("7", view_index=0, glasses=True),
            FeatureMeta("7", view_index=1, glasses=False),
            FeatureMeta("7", view_index=2, glasses=True),
            FeatureMeta("8", view_index=0, glasses=False),
        ]
        m = build_accessory_mask(FeatureBatch.labels_only(meta), "glasses")
        assert m[0, 1] and m[1, 2]
        assert not m[0, 2]  # both wear glasses
        assert not m[0, 3]  # different samples
        assert not build_accessory_mask(FeatureBatch.labels_only(meta), "mask").any()

    def test_masks_are_symmetric_with_empty_diagonal(self):
        """Test every builder yields symmetric zero-diagonal masks."""
        rng = np.random.default_rng(5)
        meta = [
            FeatureMeta(
                sample_id=str(rng.integers(0, 3)),
                dataset_id=str(rng.choice(["X", "N", "C"])),
                glasses=bool(rng.integers(0, 2)),
                mask=bool(rng.integers(0, 2)),
                pitch=float(rng.uniform(-30, 14)),
                yaw=float(rng.uniform(-26, 26)),
            )
            for _ in range(12)
        ]
        batch = FeatureBatch.labels_only(meta)
        for m in (
            build_pitch_mask(batch, 4.0),
            build_dataset_mask(batch, GridSpec()),
            build_accessory_mask(batch, "glasses"),
            build_accessory_mask(batch, "mask"),
        ):
            assert np.array_equal(m, m.T)
            assert not np.diag(m).any()


class TestKernels:
    """Test cases for CE, L1 and Dice."""

    def test_ce_cases(self):
        """Test closed-form cross-entropy values."""
        assert ce_loss(np.eye(11)[3], 3)[0] == pytest.approx(0.0)
        assert ce_loss(np.full(11, 1 / 11), 0)[0] == pytest.approx(np.log(11))
        assert ce_loss([0.5, 0.25, 0.25], 0)[0] == pytest.approx(np.log(2))

    def test_ce_gradient_identity(self):
        """Test the gradient is p - y."""
        _, grad = ce_loss([0.5, 0.25, 0.25], 1)
        np.testing.assert_allclose(grad, [0.5, -0.75, 0.25])

    def test_ce_target_out_of_range(self):
        """Test an invalid target raises."""
        with pytest.raises(DataValidationError):
            ce_loss(np.full(4, 0.25), 4)

    def test_ce_from_logits_gradient(self):
        """Test the sharpened-softmax CE gradient on 50 random instances."""
        rng = np.random.default_rng(6)
        for _ in range(50):
            logits = rng.normal(size=11)
            target = int(rng.integers(0, 11))
            err = grad_check(lambda x: ce_from_logits(x, target, 0.5), logits)
            assert err < 1e-6

    def test_l1(self):
        """Test L1 over both axes and single axes."""
        assert l1_loss((0, 0), (0, 0)) == 0.0
        assert l1_loss((2.0, -3.0), (0.0, 0.0)) == pytest.approx(2.5)
        assert l1_loss((2.0, -3.0), (0.0, 0.0), "yaw_only") == pytest.approx(3.0)
        assert l1_loss((2.0, -3.0), (0.0, 0.0), "pitch_only") == pytest.approx(2.0)

    def test_l1_pitch_mask(self):
        """Test masked pitch rows add zero error but keep their share of the mean."""
        pred = [(2.0, 1.0), (4.0, -1.0)]
        gt = [(0.0, 0.0), (0.0, 0.0)]
        assert l1_loss(pred, gt, pitch_mask=[True, False]) == pytest.approx((2 + 1 + 1) / 4)
        assert l1_loss(pred, gt, "pitch_only", pitch_mask=[True, False]) == pytest.approx(1.0)
        with pytest.raises(DataValidationError):
            l1_loss(pred, gt, pitch_mask=[True])

    def test_dice_cases(self):
        """Test Dice on exact, disjoint and half-covered masks."""
        gt = np.zeros((10, 10), bool)
        gt[:, :2] = True
        assert dice_loss(gt.astype(float), gt) == pytest.approx(0.0, abs=1e-6)
        half = np.zeros((10, 10))
        half[:, 0] = 1.0
        assert dice_loss(half, gt) == pytest.approx(1 / 3, abs=1e-6)
        other = np.zeros((10, 10))
        other[:, 5:] = 1.0
        assert dice_loss(other, gt) == pytest.approx(1.0, abs=1e-6)

    def test_dice_gradient(self):
        """Test the Dice gradient on 50 random soft masks."""
        rng = np.random.default_rng(7)
        for _ in range(50):
            gt = rng.random((6, 6)) > 0.5
            pred = rng.random((6, 6))
            assert grad_check(lambda x: dice_loss_and_grad(x, gt), pred) < 1e-4

    def test_dice_shape_mismatch(self):
        """Test mismatched masks raise."""
        with pytest.raises(DataValidationError):
            dice_loss(np.zeros((4, 4)), np.zeros((5, 4), bool))

    def test_grad_check_step(self):
        """Test a non-positive step is rejected."""
        with pytest.raises(ValueError):
            grad_check(lambda x: (0.0, x), np.zeros(2), h=0.0)


class TestComposite:
    """Test cases for the weighted composite objective."""

    @pytest.fixture
    def grid(self):
        return GridSpec()

    def perfect(self, grid, dataset_id="X"):
        bins = [(0, 6), (5, 3), (10, 12)]
        meta = [
            FeatureMeta(
                sample_id=str(i),
                dataset_id=dataset_id,
                pitch=grid.centroid(cp, Axis.PITCH),
                yaw=grid.centroid(cy, Axis.YAW),
            )
            for i, (cp, cy) in enumerate(bins)
        ]
        outputs = ModelOutputs(
            probs_pitch=np.stack([grid.one_hot(cp, Axis.PITCH) for cp, _ in bins]),
            probs_yaw=np.stack([grid.one_hot(cy, Axis.YAW) for _, cy in bins]),
        )
        return outputs, meta

    def test_perfect_predictions(self, grid):
        """Test exact predictions and masks give zero loss."""
        outputs, meta = self.perfect(grid)
        seg = np.random.default_rng(8).random((3, 4, 5, 5)) > 0.5
        outputs = ModelOutputs(
            probs_pitch=outputs.probs_pitch,
            probs_yaw=outputs.probs_yaw,
            seg=seg.astype(float),
        )
        result = composite_loss(outputs, LossTargets(meta, seg=seg), LossWeights(), grid)
        assert result.total == pytest.approx(0.0, abs=1e-6)

    def test_only_classification_weight(self, grid):
        """Test zero weights leave only the weighted classification term."""
        rng = np.random.default_rng(9)
        _, meta = self.perfect(grid)
        outputs = ModelOutputs(
            probs_pitch=sharpened_softmax(rng.normal(size=(3, 11))),
            probs_yaw=sharpened_softmax(rng.normal(size=(3, 13))),
            pred=np.array([(m.pitch, m.yaw) for m in meta]),
        )
        weights = LossWeights(
            lambda_clf=0.3, lambda_seg=0, lambda_D=0, lambda_phi=0, lambda_g=0, lambda_m=0
        )
        result = composite_loss(outputs, LossTargets(meta), weights, grid)
        assert result.terms["reg"] == pytest.approx(0.0)
        assert result.total == pytest.approx(0.3 * result.terms["clf"])
        assert result.weighted["clf"] == pytest.approx(result.total)

    def test_pitch_attenuation(self, grid):
        """Test N-dataset rows drop exactly the pitch reg and clf terms."""
        rng = np.random.default_rng(10)
        probs_p = sharpened_softmax(rng.normal(size=(4, 11)))
        probs_y = sharpened_softmax(rng.normal(size=(4, 13)))
        labels = np.column_stack([rng.uniform(-30, 14, 4), rng.uniform(-26, 26, 4)])
        outputs = ModelOutputs(probs_pitch=probs_p, probs_yaw=probs_y)
        weights = LossWeights()

        def run(dataset_id):
            meta = [
                FeatureMeta(str(i), dataset_id=dataset_id, pitch=p, yaw=y)
                for i, (p, y) in enumerate(labels)
            ]
            return composite_loss(outputs, LossTargets(meta), weights, grid)

        x, n = run("X"), run("N")
        expected = x.terms["reg_pitch"] + weights.lambda_clf * x.terms["clf_pitch"]
        assert x.total - n.total == pytest.approx(expected, abs=1e-9)
        assert n.terms["reg_pitch"] == 0.0
        assert n.terms["reg_yaw"] == pytest.approx(x.terms["reg_yaw"])

    def test_regression_term_is_l1_kernel(self, grid):
        """Test the regression term equals the L1 kernel on the same batch."""
        rng = np.random.default_rng(12)
        datasets = ["X", "N", "C", "X", "X", "N"]
        meta = [
            FeatureMeta(
                str(i),
                dataset_id=d,
                pitch=float(rng.uniform(-30, 14)),
                yaw=float(rng.uniform(-26, 26)),
            )
            for i, d in enumerate(datasets)
        ]
        labels = np.array([(m.pitch, m.yaw) for m in meta])
        pred = labels + rng.normal(0, 3, size=labels.shape)
        outputs = ModelOutputs(
            probs_pitch=sharpened_softmax(rng.normal(size=(6, 11))),
            probs_yaw=sharpened_softmax(rng.normal(size=(6, 13))),
            pred=pred,
        )
        result = composite_loss(outputs, LossTargets(meta), LossWeights(), grid)
        keep = [d == "X" for d in datasets]
        assert result.terms["reg"] == pytest.approx(l1_loss(pred, labels, pitch_mask=keep), abs=1e-12)
        assert result.terms["reg"] == pytest.approx(
            result.terms["reg_pitch"] + result.terms["reg_yaw"], abs=1e-12
        )
        assert result.weighted["reg"] == result.terms["reg"]

    def test_regression_term_unmasked_batch(self, grid):
        """Test an X-only batch regresses with the plain two-axis L1 mean."""
        rng = np.random.default_rng(13)
        labels = np.column_stack([rng.uniform(-30, 14, 5), rng.uniform(-26, 26, 5)])
        meta = [FeatureMeta(str(i), dataset_id="X", pitch=p, yaw=y) for i, (p, y) in enumerate(labels)]
        pred = labels + 1.5
        outputs = ModelOutputs(
            probs_pitch=sharpened_softmax(rng.normal(size=(5, 11))),
            probs_yaw=sharpened_softmax(rng.normal(size=(5, 13))),
            pred=pred,
        )
        result = composite_loss(outputs, LossTargets(meta), LossWeights(), grid)
        assert result.terms["reg"] == pytest.approx(l1_loss(pred, labels))
        assert result.terms["reg"] == pytest.approx(1.5)

    def test_breakdown_sums_to_total(self, grid):
        """Test weighted terms including contrastive ones sum to the total."""
        rng = np.random.default_rng(11)
        meta = [
            FeatureMeta(
                sample_id=str(i // 2),
                view_index=i % 2,
                dataset_id=["X", "N", "C"][i % 3],
                glasses=bool(i % 2),
                mask=bool((i // 2) % 2 and i % 2),
                pitch=float(rng.uniform(-30, 14)),
                yaw=float(rng.uniform(-26, 26)),
            )
            for i in range(8)
        ]
        outputs = ModelOutputs(
            probs_pitch=sharpened_softmax(rng.normal(size=(8, 11))),
            probs_yaw=sharpened_softmax(rng.normal(size=(8, 13))),
            features={k: rng.normal(size=(8, 5)) for k in ("dataset", "pitch", "glasses", "mask")},
        )
        result = composite_loss(outputs, LossTargets(meta), LossWeights(), grid)
        assert sum(result.weighted.values()) == pytest.approx(result.total, abs=1e-9)
        assert result.terms["supcon_glasses"] != 0.0

    def test_invalid_masks_skipped(self, grid):
        """Test segmentation ignores masks flagged invalid."""
        outputs, meta = self.perfect(grid)
        gt = np.ones((3, 4, 4, 4), bool)
        pred = np.ones((3, 4, 4, 4))
        pred[0, 0] = 0.0
        valid = np.ones((3, 4), bool)
        valid[0, 0] = False
        outputs = ModelOutputs(outputs.probs_pitch, outputs.probs_yaw, seg=pred)
        result = composite_loss(
            outputs, LossTargets(meta, seg=gt, seg_valid=valid), LossWeights(), grid
        )
        assert result.terms["seg"] == pytest.approx(0.0, abs=1e-6)
