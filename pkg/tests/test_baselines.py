import hashlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockveil.baselines import (
    CatMapKey,
    NaiveShuffleKey,
    catmap_decrypt,
    catmap_decrypt_images,
    catmap_encrypt,
    catmap_encrypt_images,
    catmap_step,
    catmap_step_inverse,
    derive_catmap_key,
    derive_naive_key,
    naive_block_shuffle,
    naive_block_unshuffle,
)
from blockveil.cipher import split_blocks
from blockveil.errors import DimensionError, NotSquare


def rand_img(rng, h, w):
    return rng.integers(0, 256, (h, w, 3), dtype=np.uint8)


# -- naive block shuffle -------------------------------------------------------

def test_naive_key_derivation():
    key = derive_naive_key(11, 4)
    assert sorted(key.pos_perm.tolist()) == list(range(16))
    again = derive_naive_key(11, 4)
    assert np.array_equal(key.pos_perm, again.pos_perm)


def test_naive_identity_perm_is_noop():
    key = NaiveShuffleKey(seed=0, block_size=4, pos_perm=np.arange(16))
    img = rand_img(np.random.default_rng(0), 8, 8)
    assert np.array_equal(naive_block_shuffle(img, key), img)


def test_naive_m2_example():
    # block pixels [p0, p1, p2, p3], pos_perm [2, 3, 0, 1] -> [p2, p3, p0, p1]
    key = NaiveShuffleKey(seed=0, block_size=2, pos_perm=np.array([2, 3, 0, 1]))
    img = np.arange(12, dtype=np.uint8).reshape(2, 2, 3)
    out = naive_block_shuffle(img, key)
    flat_in = img.reshape(4, 3)
    flat_out = out.reshape(4, 3)
    for s, src in enumerate([2, 3, 0, 1]):
        assert np.array_equal(flat_out[s], flat_in[src])


def test_naive_preserves_per_block_pixel_multiset():
    rng = np.random.default_rng(1)
    key = derive_naive_key(5, 4)
    img = rand_img(rng, 16, 16)
    out = naive_block_shuffle(img, key)
    for b_in, b_out in zip(split_blocks(img, 4), split_blocks(out, 4)):
        tin = sorted(map(tuple, b_in.reshape(-1, 3).tolist()))
        tout = sorted(map(tuple, b_out.reshape(-1, 3).tolist()))
        assert tin == tout


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_naive_round_trip(seed):
    rng = np.random.default_rng(seed)
    key = derive_naive_key(seed, 4)
    img = rand_img(rng, 8, 12)
    assert np.array_equal(naive_block_unshuffle(naive_block_shuffle(img, key), key), img)


def test_naive_rejects_indivisible():
    key = derive_naive_key(5, 4)
    with pytest.raises(DimensionError):
        naive_block_shuffle(np.zeros((30, 32, 3), np.uint8), key)


# -- cat map -------------------------------------------------------------------

def test_catmap_step_fixed_point():
    for p, q, n in ((1, 1, 4), (3, 5, 32), (7, 2, 9)):
        assert catmap_step(0, 0, p, q, n) == (0, 0)


def test_catmap_step_arithmetic_example():
    assert catmap_step(1, 0, 1, 1, 4) == (1, 1)


def test_catmap_whole_grid_period_24_at_n32():
    n = 32
    xs, ys = np.meshgrid(np.arange(n), np.arange(n))
    x, y = xs.copy(), ys.copy()
    steps = 0
    while True:
        x, y = (x + y) % n, (x + 2 * y) % n
        steps += 1
        if np.array_equal(x, xs) and np.array_equal(y, ys):
            break
        assert steps < 1000
    assert steps == 24


def test_catmap_inverse_composes_to_identity_on_all_points():
    n = 8
    for p, q in ((1, 1), (3, 5), (2, 7)):
        for y in range(n):
            for x in range(n):
                xf, yf = catmap_step(x, y, p, q, n)
                assert catmap_step_inverse(xf, yf, p, q, n) == (x, y)


@pytest.mark.parametrize("n", [4, 8, 32])
def test_catmap_position_map_bijective(n):
    for seed in (0, 1, 99):
        key = derive_catmap_key(seed, n, iterations=3)
        dests = set()
        for y in range(n):
            for x in range(n):
                xd, yd = x, y
                for _ in range(key.iterations):
                    xd, yd = catmap_step(xd, yd, key.p, key.q, n)
                dests.add((xd, yd))
        assert len(dests) == n * n


def test_catmap_pq_derivation_in_range():
    for seed in range(30):
        key = derive_catmap_key(seed, 32)
        assert 1 <= key.p <= 31
        assert 1 <= key.q <= 31


def test_catmap_t0_is_identity():
    key = derive_catmap_key(9, 16, iterations=0)
    img = rand_img(np.random.default_rng(2), 16, 16)
    assert np.array_equal(catmap_encrypt(img, key), img)


def test_catmap_preserves_pixel_multiset_without_xor():
    key = derive_catmap_key(9, 16, iterations=5)
    img = rand_img(np.random.default_rng(3), 16, 16)
    out = catmap_encrypt(img, key)
    assert sorted(map(tuple, img.reshape(-1, 3).tolist())) == \
        sorted(map(tuple, out.reshape(-1, 3).tolist()))


def test_catmap_golden_digest():
    key = derive_catmap_key(7, 32, iterations=5)
    pt = (np.arange(32 * 32 * 3) % 256).astype(np.uint8).reshape(32, 32, 3)
    ct = catmap_encrypt(pt, key)
    golden = open("tests/golden/catmap_n32_seed7_t5.sha256").read().strip()
    assert hashlib.sha256(ct.tobytes()).hexdigest() == golden
    assert np.array_equal(catmap_decrypt(ct, key), pt)


def test_catmap_matches_oracle_scramble(catmap_oracle):
    n, seed = 16, 3
    key = derive_catmap_key(seed, n, iterations=4)
    p, q = catmap_oracle.derive_pq(seed, n)
    assert (p, q) == (key.p, key.q)
    rng = np.random.default_rng(4)
    img = rand_img(rng, n, n)
    pixels = [tuple(img.reshape(-1, 3)[i]) for i in range(n * n)]
    for _ in range(4):
        pixels = catmap_oracle.scramble_once(pixels, p, q, n)
    ref = np.array(pixels, np.uint8).reshape(n, n, 3)
    assert np.array_equal(catmap_encrypt(img, key), ref)


@given(st.integers(0, 2**32 - 1), st.booleans())
@settings(max_examples=25, deadline=None)
def test_catmap_round_trip(seed, xor):
    rng = np.random.default_rng(seed)
    key = derive_catmap_key(seed, 16, iterations=5, xor_diffusion=xor)
    img = rand_img(rng, 16, 16)
    assert np.array_equal(catmap_decrypt(catmap_encrypt(img, key), key), img)


def test_catmap_xor_changes_bytes_and_inverts():
    plain = derive_catmap_key(5, 8, iterations=2, xor_diffusion=False)
    diffused = derive_catmap_key(5, 8, iterations=2, xor_diffusion=True)
    img = rand_img(np.random.default_rng(5), 8, 8)
    a, b = catmap_encrypt(img, plain), catmap_encrypt(img, diffused)
    assert not np.array_equal(a, b)
    assert np.array_equal(catmap_decrypt(b, diffused), img)


def test_catmap_batch_matches_single():
    key = derive_catmap_key(6, 8, iterations=3)
    imgs = np.random.default_rng(6).integers(0, 256, (4, 8, 8, 3), dtype=np.uint8)
    batch = catmap_encrypt_images(imgs, key)
    for i in range(4):
        assert np.array_equal(batch[i], catmap_encrypt(imgs[i], key))
    assert np.array_equal(catmap_decrypt_images(batch, key), imgs)


def test_catmap_rejects_non_square():
    key = derive_catmap_key(7, 8)
    with pytest.raises(NotSquare):
        catmap_encrypt(np.zeros((8, 16, 3), np.uint8), key)
    with pytest.raises(NotSquare):
        catmap_encrypt(np.zeros((16, 16, 3), np.uint8), key)  # wrong grid for key
