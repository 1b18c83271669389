"""Key files: the only serialized key form.

Text, LF line endings:

    blockveil-key v1
    seed=<decimal u64>
    block=<M>
    scheme=<proposed|naive|catmap>

catmap keys carry two extra lines, ``T=<int>`` and ``xor=<0|1>``. Masks and
permutations are never serialized; they are re-derived from the seed.
"""

from dataclasses import dataclass
from pathlib import Path

from .errors import KeyFormatError

MAGIC = "blockveil-key v1"
SCHEMES = ("proposed", "naive", "catmap")
_U64_MAX = (1 << 64) - 1


@dataclass(frozen=True)
class KeySpec:
    """Parsed key-file contents; materialize with the matching derive_* call."""

    scheme: str
    seed: int
    block_size: int
    iterations: int = 5
    xor_diffusion: bool = False

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise KeyFormatError(f"unknown scheme {self.scheme!r}")
        if not 0 <= self.seed <= _U64_MAX:
            raise KeyFormatError("seed out of u64 range")
        if self.block_size < 1:
            raise KeyFormatError("block must be positive")
        if self.iterations < 0:
            raise KeyFormatError("T must be non-negative")


def write_key_file(path, spec: KeySpec) -> None:
    lines = [MAGIC, f"seed={spec.seed}", f"block={spec.block_size}", f"scheme={spec.scheme}"]
    if spec.scheme == "catmap":
        lines.append(f"T={spec.iterations}")
        lines.append(f"xor={1 if spec.xor_diffusion else 0}")
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))


def read_key_file(path) -> KeySpec:
    try:
        text = Path(path).read_bytes().decode("ascii")
    except UnicodeDecodeError as exc:
        raise KeyFormatError(f"{path}: not a text key file") from exc
    lines = text.split("\n")
    if not lines or lines[0] != MAGIC:
        raise KeyFormatError(f"{path}: missing '{MAGIC}' header")
    fields = {}
    for ln in lines[1:]:
        if not ln:
            continue
        if "=" not in ln:
            raise KeyFormatError(f"{path}: malformed line {ln!r}")
        k, v = ln.split("=", 1)
        fields[k] = v
    try:
        seed = int(fields["seed"])
        block = int(fields["block"])
        scheme = fields["scheme"]
    except (KeyError, ValueError) as exc:
        raise KeyFormatError(f"{path}: missing or malformed field: {exc}") from exc
    iterations = 5
    xor = False
    if scheme == "catmap":
        try:
            iterations = int(fields.get("T", "5"))
            xor = {"0": False, "1": True}[fields.get("xor", "0")]
        except (KeyError, ValueError) as exc:
            raise KeyFormatError(f"{path}: malformed catmap field: {exc}") from exc
    try:
        return KeySpec(scheme=scheme, seed=seed, block_size=block,
                       iterations=iterations, xor_diffusion=xor)
    except KeyFormatError as exc:
        raise KeyFormatError(f"{path}: {exc}") from exc
