/**
 * Comparison runner: trains one model per scheme file and writes the report.
 *
 *   node dist/run_repro.js --plain plain.bin --proposed prop.bin \
 *     --naive naive.bin --catmap cat.bin --epochs 20 --seed 0 \
 *     --train-count 5000 --test-count 1000 --out report.csv
 *
 * Scheme files come from the encryption CLI (`blockveil encrypt`); this
 * runner never touches keys or ciphers.
 */

import { Dataset, readCifar10, readCifar100 } from "./cifar";
import { TOY_SPEC } from "./model";
import { TOY_TRAIN, trainAndEval, writeReport } from "./train";

const SCHEMES = ["plain", "proposed", "naive", "catmap"] as const;

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    if (!argv[i].startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`malformed arguments near '${argv[i]}'`);
    }
    out.set(argv[i].slice(2), argv[i + 1]);
  }
  return out;
}

async function main(): Promise<number> {
  const args = parseArgs(process.argv.slice(2));
  const format = args.get("format") ?? "cifar10";
  const reader = format === "cifar100" ? readCifar100 : readCifar10;
  const datasets = new Map<string, Dataset>();
  for (const scheme of SCHEMES) {
    const path = args.get(scheme);
    if (path) {
      datasets.set(scheme, reader(path));
    }
  }
  if (datasets.size === 0) {
    console.error(`no inputs; pass at least one of ${SCHEMES.map((s) => "--" + s).join(", ")}`);
    return 2;
  }
  const cfg = {
    ...TOY_TRAIN,
    epochs: Number(args.get("epochs") ?? TOY_TRAIN.epochs),
    batchSize: Number(args.get("batch-size") ?? TOY_TRAIN.batchSize),
    lr: Number(args.get("lr") ?? TOY_TRAIN.lr),
    seed: Number(args.get("seed") ?? TOY_TRAIN.seed),
    trainCount: Number(args.get("train-count") ?? TOY_TRAIN.trainCount),
    testCount: Number(args.get("test-count") ?? TOY_TRAIN.testCount),
  };
  const results = trainAndEval(datasets, TOY_SPEC, cfg, (m) => console.log(m));
  const out = args.get("out") ?? "report.csv";
  writeReport(results, out);
  console.log(`wrote ${out}`);
  return 0;
}

main().then((code) => {
  process.exitCode = code;
});
