"""Weight-shared block-embedding classifier for learnability checks.

Architecture: an M x M stride-M block embedding (one weight matrix shared by
every block position), ReLU, a 3x3 same-padded mixing convolution on the
block grid, ReLU, then a dense softmax head. The shared, block-aligned first
layer is the load-bearing choice: it sees every block under the same fixed
transform, so block-local ciphers stay learnable while global scrambles do
not. A fully connected first layer would absorb any permutation and erase
that distinction.

Everything is float64 and bit-reproducible given (config, seed): parameter
init and epoch shuffling come from seeded PCG64 streams, batches are visited
in a fixed order, and reductions run in a fixed order.
"""

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import blas as _blas

from .errors import DimensionError, EmptyBatch, EmptyDataset


class _Workspace:
    """Reused per-batch buffers.

    Training touches ~60 MB of scratch per batch; without reuse every batch
    re-mmaps and page-faults that memory, which dominates single-core
    runtime. Buffers are keyed by name and shape (steady-state batches share
    shapes, the final partial batch gets its own set).
    """

    def __init__(self):
        self._bufs: dict = {}

    def get(self, name: str, shape: tuple) -> np.ndarray:
        key = (name, shape)
        buf = self._bufs.get(key)
        if buf is None:
            buf = np.empty(shape)
            self._bufs[key] = buf
        return buf

    def zeros_on_create(self, name: str, shape: tuple) -> np.ndarray:
        """For buffers whose zero regions are never written (e.g. pad borders)."""
        key = (name, shape)
        buf = self._bufs.get(key)
        if buf is None:
            buf = np.zeros(shape)
            self._bufs[key] = buf
        return buf

    def zeros(self, name: str, shape: tuple) -> np.ndarray:
        buf = self.get(name, shape)
        buf.fill(0.0)
        return buf


@dataclass(frozen=True)
class ProbeConfig:
    """Desk-scale defaults: 5000/1000 split, 30 epochs, step decay after epoch 20."""

    block_size: int = 4
    embed_dim: int = 64
    mix_dim: int = 32
    classes: int = 10
    image_size: tuple[int, int] = (32, 32)  # (height, width)
    lr: float = 0.05
    lr_decay_factor: float = 0.1
    lr_decay_epoch: int = 20  # epochs after this one use lr * factor
    momentum: float = 0.9
    batch_size: int = 128
    epochs: int = 30
    seed: int = 0
    train_size: int = 5000
    test_size: int = 1000

    @property
    def grid(self) -> tuple[int, int]:
        h, w = self.image_size
        if h % self.block_size or w % self.block_size:
            raise DimensionError(f"image {h}x{w} not divisible by block {self.block_size}")
        return h // self.block_size, w // self.block_size


@dataclass
class ProbeModel:
    """Parameters; w1 is the shared block embedding, w2 the 3x3 grid mixer."""

    block_size: int
    grid: tuple[int, int]
    w1: np.ndarray  # (d1, 3*M*M)
    b1: np.ndarray  # (d1,)
    w2: np.ndarray  # (d2, d1, 3, 3)
    b2: np.ndarray  # (d2,)
    w3: np.ndarray  # (C, gh*gw*d2)
    b3: np.ndarray  # (C,)

    def params(self) -> dict[str, np.ndarray]:
        return {"w1": self.w1, "b1": self.b1, "w2": self.w2,
                "b2": self.b2, "w3": self.w3, "b3": self.b3}


def init_probe(cfg: ProbeConfig, seed: int) -> ProbeModel:
    """Uniform +-sqrt(6/fan_in) for w1 and w2; zero head and biases.

    The zero head forces exactly uniform softmax at init, so the initial
    loss is ln(classes) and checkable.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 0])))
    m = cfg.block_size
    gh, gw = cfg.grid
    fan1 = 3 * m * m
    fan2 = cfg.embed_dim * 9
    lim1 = np.sqrt(6.0 / fan1)
    lim2 = np.sqrt(6.0 / fan2)
    return ProbeModel(
        block_size=m,
        grid=(gh, gw),
        w1=rng.uniform(-lim1, lim1, size=(cfg.embed_dim, fan1)),
        b1=np.zeros(cfg.embed_dim),
        w2=rng.uniform(-lim2, lim2, size=(cfg.mix_dim, cfg.embed_dim, 3, 3)),
        b2=np.zeros(cfg.mix_dim),
        w3=np.zeros((cfg.classes, gh * gw * cfg.mix_dim)),
        b3=np.zeros(cfg.classes),
    )


def normalize(images_u8: np.ndarray) -> np.ndarray:
    """uint8 pixels -> float64 in [0, 1]."""
    return np.asarray(images_u8, dtype=np.float64) / 255.0


def block_view(images01: np.ndarray, m: int) -> np.ndarray:
    """(B, H, W, 3) -> (B, blocks, 3*M*M); block vectors are row-major RGB."""
    b, h, w, _ = images01.shape
    if h % m or w % m:
        raise DimensionError(f"image {h}x{w} not divisible by block {m}")
    gh, gw = h // m, w // m
    return np.ascontiguousarray(
        images01.reshape(b, gh, m, gw, m, 3).transpose(0, 1, 3, 2, 4, 5)
    ).reshape(b, gh * gw, 3 * m * m)


def _forward_blocks(model: ProbeModel, xb: np.ndarray, want_cache: bool,
                    ws: _Workspace | None = None):
    if ws is None:
        ws = _Workspace()
    b, nblk, f = xb.shape
    gh, gw = model.grid
    d1 = model.w1.shape[0]
    d2 = model.w2.shape[0]
    rows = b * nblk
    a1 = ws.get("a1", (rows, d1))
    np.matmul(xb.reshape(rows, f), model.w1.T, out=a1)
    a1 += model.b1
    np.maximum(a1, 0.0, out=a1)
    # borders of the padded grid stay zero; the center is rewritten per batch
    pad = ws.zeros_on_create("pad", (b, gh + 2, gw + 2, d1))
    pad[:, 1 : gh + 1, 1 : gw + 1, :] = a1.reshape(b, gh, gw, d1)
    # contiguous per-tap weights, stored (d1, d2) so .T gives zero-copy
    # Fortran views for BLAS; strided tap views starve it
    taps = ws.get("taps", (9, d1, d2))
    np.copyto(taps.reshape(3, 3, d1, d2), model.w2.transpose(2, 3, 1, 0))
    # 3x3 same conv: 9 shifted window copies, GEMM-accumulated into a2
    a2 = ws.get("a2", (rows, d2))
    a2[:] = model.b2
    a2t = a2.T  # F-contiguous view for the accumulating GEMM
    wins = []
    for t in range(9):
        ky, kx = divmod(t, 3)
        win = ws.get(f"win{t}", (rows, d1))
        np.copyto(win.reshape(b, gh, gw, d1), pad[:, ky : ky + gh, kx : kx + gw, :])
        wins.append(win)
        # a2.T = w2_tap @ win.T + a2.T, accumulated in place
        _blas.dgemm(1.0, taps[t].T, win.T, beta=1.0, c=a2t, overwrite_c=True)
    np.maximum(a2, 0.0, out=a2)
    feats = a2.reshape(b, gh * gw * d2)
    logits = ws.get("logits", (b, model.w3.shape[0]))
    np.matmul(feats, model.w3.T, out=logits)
    logits += model.b3
    zmax = logits.max(axis=1, keepdims=True)
    probs = ws.get("probs", logits.shape)
    np.subtract(logits, zmax, out=probs)
    np.exp(probs, out=probs)
    probs /= probs.sum(axis=1, keepdims=True)
    if not want_cache:
        return probs, None
    return probs, (a1, taps, wins, a2, feats, logits, zmax)


def _check_shape(model: ProbeModel, images01: np.ndarray):
    gh, gw = model.grid
    m = model.block_size
    if images01.ndim != 4 or images01.shape[1:] != (gh * m, gw * m, 3):
        raise DimensionError(
            f"expected (B, {gh * m}, {gw * m}, 3) inputs, got {images01.shape}")


def forward(model: ProbeModel, images01: np.ndarray) -> np.ndarray:
    """Class probabilities for images normalized to [0, 1]; rows sum to 1."""
    _check_shape(model, images01)
    probs, _ = _forward_blocks(model, block_view(images01, model.block_size), want_cache=False)
    return probs


def loss_and_grad(model: ProbeModel, images01: np.ndarray, labels: np.ndarray):
    """Mean cross-entropy and analytic gradients for every parameter."""
    _check_shape(model, images01)
    labels = np.asarray(labels, dtype=np.int64)
    if images01.shape[0] == 0:
        raise EmptyBatch("gradient of an empty batch")
    xb = block_view(images01, model.block_size)
    return _loss_and_grad_blocks(model, xb, labels, _Workspace())


def _loss_and_grad_blocks(model: ProbeModel, xb: np.ndarray, labels: np.ndarray,
                          ws: _Workspace):
    b = xb.shape[0]
    gh, gw = model.grid
    d1 = model.w1.shape[0]
    d2 = model.w2.shape[0]
    nrows = b * gh * gw
    probs, cache = _forward_blocks(model, xb, want_cache=True, ws=ws)
    a1, taps, wins, a2, feats, logits, zmax = cache
    rows = np.arange(b)
    lse = zmax[:, 0] + np.log(np.exp(logits - zmax).sum(axis=1))
    loss = float(np.mean(lse - logits[rows, labels]))

    dlogits = ws.get("dlogits", probs.shape)
    np.copyto(dlogits, probs)
    dlogits[rows, labels] -= 1.0
    dlogits /= b
    gw3 = ws.get("gw3", model.w3.shape)
    np.matmul(dlogits.T, feats, out=gw3)
    gb3 = dlogits.sum(axis=0)
    dz2 = ws.get("dz2", (nrows, d2))
    np.matmul(dlogits, model.w3, out=dz2.reshape(b, gh * gw * d2))
    dz2 *= a2 > 0.0
    gb2 = dz2.sum(axis=0)
    gtaps = ws.get("gtaps", (9, d1, d2))  # per-tap weight grads, (d1, d2) layout
    dpad = ws.zeros("dpad", (b, gh + 2, gw + 2, d1))
    dwin = ws.get("dwin", (nrows, d1))
    for t in range(9):
        ky, kx = divmod(t, 3)
        np.matmul(wins[t].T, dz2, out=gtaps[t])
        np.matmul(dz2, taps[t].T, out=dwin)
        dpad[:, ky : ky + gh, kx : kx + gw, :] += dwin.reshape(b, gh, gw, d1)
    gw2 = ws.get("gw2", model.w2.shape)
    np.copyto(gw2, gtaps.reshape(3, 3, d1, d2).transpose(3, 2, 0, 1))
    dz1 = ws.get("dz1", (nrows, d1))
    np.copyto(dz1.reshape(b, gh, gw, d1), dpad[:, 1 : gh + 1, 1 : gw + 1, :])
    dz1 *= a1 > 0.0
    gw1 = ws.get("gw1", model.w1.shape)
    np.matmul(dz1.T, xb.reshape(nrows, xb.shape[2]), out=gw1)
    gb1 = dz1.sum(axis=0)
    grads = {"w1": gw1, "b1": gb1, "w2": gw2, "b2": gb2, "w3": gw3, "b3": gb3}
    return loss, grads


def evaluate(model: ProbeModel, images01: np.ndarray, labels: np.ndarray) -> float:
    """Fraction of argmax-correct predictions; ties go to the lowest class index."""
    if images01.shape[0] == 0:
        raise EmptyDataset("evaluation on an empty dataset")
    _check_shape(model, images01)
    labels = np.asarray(labels, dtype=np.int64)
    xb = block_view(images01, model.block_size)
    return _evaluate_blocks(model, xb, labels, _Workspace())


def _evaluate_blocks(model: ProbeModel, xb: np.ndarray, labels: np.ndarray,
                     ws: _Workspace) -> float:
    correct = 0
    for start in range(0, xb.shape[0], 512):
        chunk = xb[start : start + 512]
        probs, _ = _forward_blocks(model, chunk, want_cache=False, ws=ws)
        correct += int((probs.argmax(axis=1) == labels[start : start + 512]).sum())
    return correct / xb.shape[0]


@dataclass
class ProbeResult:
    """Training outcome plus the per-epoch curve (epoch, train loss, test acc)."""

    final_train_loss: float
    test_accuracy: float
    curve: list[tuple[int, float, float]] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    def to_text(self) -> str:
        return (
            f"final_train_loss={self.final_train_loss:.6f}\n"
            f"test_accuracy={self.test_accuracy:.6f}\n"
            f"epochs={len(self.curve)}\n"
            f"elapsed_seconds={self.elapsed_seconds:.3f}\n"
        )

    def curve_csv(self) -> str:
        rows = ["epoch,loss,test_acc"]
        rows += [f"{e},{l:.6f},{a:.6f}" for e, l, a in self.curve]
        return "\n".join(rows) + "\n"


def sgd_train(model: ProbeModel, train_images01: np.ndarray, train_labels: np.ndarray,
              test_images01: np.ndarray, test_labels: np.ndarray,
              cfg: ProbeConfig) -> ProbeResult:
    """Momentum SGD (v = mu*v - lr*g; w += v) with seeded per-epoch shuffling.

    Bit-reproducible for a given (cfg, seed); the model is updated in place.
    """
    n = train_images01.shape[0]
    if n == 0:
        raise EmptyDataset("training on an empty dataset")
    train_labels = np.asarray(train_labels, dtype=np.int64)
    test_labels = np.asarray(test_labels, dtype=np.int64)
    xb_train = block_view(train_images01, cfg.block_size)
    xb_test = block_view(test_images01, cfg.block_size) if test_images01.shape[0] else None
    shuf = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, 1])))
    vel = {k: np.zeros_like(v) for k, v in model.params().items()}
    params = model.params()
    ws = _Workspace()
    curve: list[tuple[int, float, float]] = []
    t0 = time.perf_counter()
    mean_loss = float("nan")
    test_acc = float("nan")
    for epoch in range(1, cfg.epochs + 1):
        lr = cfg.lr * (cfg.lr_decay_factor if epoch > cfg.lr_decay_epoch else 1.0)
        order = shuf.permutation(n)
        total_loss = 0.0
        for start in range(0, n, cfg.batch_size):
            # sorting improves gather locality; batch membership is unchanged
            # and the order is still deterministic
            idx = np.sort(order[start : start + cfg.batch_size])
            loss, grads = _loss_and_grad_blocks(model, xb_train[idx], train_labels[idx], ws)
            total_loss += loss * idx.shape[0]
            for name, g in grads.items():
                v = vel[name]
                v *= cfg.momentum
                v -= lr * g
                params[name] += v
        mean_loss = total_loss / n
        if xb_test is not None:
            test_acc = _evaluate_blocks(model, xb_test, test_labels, ws)
        curve.append((epoch, mean_loss, test_acc))
    return ProbeResult(
        final_train_loss=mean_loss,
        test_accuracy=test_acc,
        curve=curve,
        elapsed_seconds=time.perf_counter() - t0,
    )


def run_probe(images_u8: np.ndarray, labels: np.ndarray, cfg: ProbeConfig):
    """Split off the first train_size/test_size records, train, and report."""
    total = cfg.train_size + cfg.test_size
    if images_u8.shape[0] < total:
        raise EmptyDataset(
            f"need {total} records for a {cfg.train_size}/{cfg.test_size} split, "
            f"got {images_u8.shape[0]}")
    tr = normalize(images_u8[: cfg.train_size])
    te = normalize(images_u8[cfg.train_size : total])
    model = init_probe(cfg, cfg.seed)
    result = sgd_train(model, tr, labels[: cfg.train_size], te,
                       labels[cfg.train_size : total], cfg)
    return model, result
