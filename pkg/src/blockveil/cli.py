"""Command-line pipeline: keygen, encrypt, decrypt, metrics, probe, export.

All randomness flows from --seed; reports go to stdout, diagnostics to
stderr as a single line. Exit codes: 0 ok, 2 usage, 3 unreadable input,
4 malformed data or key file, 5 scheme mismatch.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import probe as probe_mod
from .dataset import export_grid, read_dataset, write_cifar
from .errors import BlockveilError, KeyFormatError, SchemeMismatch
from .keyfile import SCHEMES, KeySpec, read_key_file, write_key_file
from .metrics import dataset_report
from .schemes import transform_dataset

EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_SCHEME = 5


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blockveil")
    sub = ap.add_subparsers(dest="command", required=True)

    kg = sub.add_parser("keygen", help="derive and write a key file")
    kg.add_argument("--seed", type=int, required=True)
    kg.add_argument("--block", type=int, default=4)
    kg.add_argument("--scheme", choices=SCHEMES, default="proposed")
    kg.add_argument("--iterations", "-T", type=int, default=5, help="catmap iterations")
    kg.add_argument("--xor", type=int, choices=(0, 1), default=0, help="catmap XOR pass")
    kg.add_argument("-o", "--out", required=True)

    for name in ("encrypt", "decrypt"):
        p = sub.add_parser(name, help=f"{name} a dataset file record-for-record")
        p.add_argument("--key", required=True)
        p.add_argument("--in", dest="inp", required=True)
        p.add_argument("--format", choices=("cifar10", "cifar100"), default="cifar10")
        p.add_argument("--scheme", choices=SCHEMES, help="assert the key file's scheme")
        p.add_argument("-o", "--out", required=True)

    mt = sub.add_parser("metrics", help="print histogram/entropy/correlation report")
    mt.add_argument("--in", dest="inp", required=True)
    mt.add_argument("--format", choices=("cifar10", "cifar100"), default="cifar10")
    mt.add_argument("--sample", type=int, default=100, help="first N images (0 = all)")

    pb = sub.add_parser("probe", help="train the learnability probe on dataset files")
    pb.add_argument("--plain", help="plain dataset file")
    pb.add_argument("--encrypted", action="append", default=[], help="encrypted dataset file (repeatable)")
    pb.add_argument("--format", choices=("cifar10", "cifar100"), default="cifar10")
    pb.add_argument("--train-size", type=int, default=5000)
    pb.add_argument("--test-size", type=int, default=1000)
    pb.add_argument("--epochs", type=int, default=30)
    pb.add_argument("--batch-size", type=int, default=128)
    pb.add_argument("--lr", type=float, default=0.05)
    pb.add_argument("--momentum", type=float, default=0.9)
    pb.add_argument("--block", type=int, default=4)
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--curve-dir", help="write per-input loss curves as CSV here")

    ex = sub.add_parser("export", help="write a P6 comparison sheet")
    ex.add_argument("--in", dest="inp", required=True)
    ex.add_argument("--format", choices=("cifar10", "cifar100"), default="cifar10")
    ex.add_argument("--count", type=int, default=8)
    ex.add_argument("--cols", type=int, default=4)
    ex.add_argument("-o", "--out", required=True)
    return ap


def _read(path, fmt):
    if not Path(path).exists():
        raise FileNotFoundError(path)
    return read_dataset(path, fmt)


def _cmd_keygen(args) -> int:
    spec = KeySpec(scheme=args.scheme, seed=args.seed, block_size=args.block,
                   iterations=args.iterations, xor_diffusion=bool(args.xor))
    write_key_file(args.out, spec)
    return 0


def _cmd_crypt(args, decrypt: bool) -> int:
    spec = read_key_file(args.key)
    if args.scheme and args.scheme != spec.scheme:
        raise SchemeMismatch(f"key file carries scheme={spec.scheme}, requested {args.scheme}")
    ds = _read(args.inp, args.format)
    write_cifar(transform_dataset(ds, spec, decrypt=decrypt), args.out)
    return 0


def _cmd_metrics(args) -> int:
    ds = _read(args.inp, args.format)
    images = ds.images if args.sample == 0 else ds.images[: args.sample]
    sys.stdout.write(dataset_report(images))
    return 0


def _probe_cfg(args, classes: int) -> probe_mod.ProbeConfig:
    return probe_mod.ProbeConfig(
        block_size=args.block, classes=classes, lr=args.lr, momentum=args.momentum,
        batch_size=args.batch_size, epochs=args.epochs, seed=args.seed,
        train_size=args.train_size, test_size=args.test_size)


def _cmd_probe(args) -> int:
    inputs = []
    if args.plain:
        inputs.append(("plain", args.plain))
    inputs += [(f"encrypted{i}" if len(args.encrypted) > 1 else "encrypted", p)
               for i, p in enumerate(args.encrypted)]
    if not inputs:
        raise KeyFormatError("probe needs --plain and/or --encrypted inputs")
    for name, path in inputs:
        ds = _read(path, args.format)
        cfg = _probe_cfg(args, ds.num_classes)
        _, result = probe_mod.run_probe(ds.images, ds.labels, cfg)
        sys.stdout.write(f"[{name}]\n" + result.to_text())
        if args.curve_dir:
            out = Path(args.curve_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{name}.csv").write_text(result.curve_csv())
    return 0


def _cmd_export(args) -> int:
    ds = _read(args.inp, args.format)
    export_grid(list(ds.images[: args.count]), args.cols, args.out)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    np.seterr(all="raise", under="ignore")
    try:
        if args.command == "keygen":
            return _cmd_keygen(args)
        if args.command == "encrypt":
            return _cmd_crypt(args, decrypt=False)
        if args.command == "decrypt":
            return _cmd_crypt(args, decrypt=True)
        if args.command == "metrics":
            return _cmd_metrics(args)
        if args.command == "probe":
            return _cmd_probe(args)
        if args.command == "export":
            return _cmd_export(args)
        raise AssertionError(args.command)
    except SchemeMismatch as exc:
        print(f"blockveil: error: {exc}", file=sys.stderr)
        return EXIT_SCHEME
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        print(f"blockveil: error: cannot read {exc}", file=sys.stderr)
        return EXIT_IO
    except (BlockveilError, OSError) as exc:
        print(f"blockveil: error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    raise SystemExit(main())
