#!/usr/bin/env python3
"""Straight-line oracle for the cat-map scrambler golden vector.

Iterates the grid map x' = (x + p*y) mod N, y' = (q*x + (p*q+1)*y) mod N
pixel by pixel in plain loops for N=32, seed=7, T=5, no xor stage, on the
plaintext whose flat byte i is i mod 256. Records sha256 of the ciphertext
in tests/golden/catmap_n32_seed7_t5.sha256.

Independent of the blockveil package by design.
"""

import hashlib
import sys
from pathlib import Path

MASK64 = (1 << 64) - 1


def splitmix64_stream(seed):
    state = seed & MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        yield z ^ (z >> 31)


def derive_pq(seed, n):
    gen = splitmix64_stream(seed)
    p = next(gen) % (n - 1) + 1
    q = next(gen) % (n - 1) + 1
    return p, q


def scramble_once(pixels, p, q, n):
    """pixels: list of n*n (r,g,b) tuples, row-major; returns moved copy."""
    out = [None] * (n * n)
    for y in range(n):
        for x in range(n):
            xd = (x + p * y) % n
            yd = (q * x + (p * q + 1) * y) % n
            out[yd * n + xd] = pixels[y * n + x]
    assert all(px is not None for px in out), "map is not a bijection"
    return out


def period_check():
    # classic whole-grid period for p=q=1 at N=32 must be 24
    n = 32
    ident = list(range(n * n))
    cur = [(i,) for i in ident]
    steps = 0
    while True:
        cur = scramble_once(cur, 1, 1, n)
        steps += 1
        if [c[0] for c in cur] == ident:
            break
        assert steps < 1000
    assert steps == 24, f"period {steps}"


def golden_digest():
    n, seed, iters = 32, 7, 5
    p, q = derive_pq(seed, n)
    flat = bytes(i % 256 for i in range(n * n * 3))
    pixels = [tuple(flat[i * 3 : i * 3 + 3]) for i in range(n * n)]
    for _ in range(iters):
        pixels = scramble_once(pixels, p, q, n)
    ct = bytes(b for px in pixels for b in px)
    # hand inversion via the inverse unimodular map
    back = pixels
    for _ in range(iters):
        out = [None] * (n * n)
        for y in range(n):
            for x in range(n):
                xs = ((p * q + 1) * x - p * y) % n
                ys = (-q * x + y) % n
                out[ys * n + xs] = back[y * n + x]
        back = out
    assert bytes(b for px in back for b in px) == flat, "hand inversion failed"
    return hashlib.sha256(ct).hexdigest()


def main(argv):
    out = Path(__file__).resolve().parents[1] / "golden" / "catmap_n32_seed7_t5.sha256"
    period_check()
    text = golden_digest() + "\n"
    if "--check" in argv:
        if out.read_text() != text:
            print("golden mismatch", file=sys.stderr)
            return 1
        print("catmap golden ok")
        return 0
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
