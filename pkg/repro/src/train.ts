/**
 * Seeded momentum-SGD training loop and the per-scheme comparison runner.
 *
 * Determinism: weight init takes per-layer seeds from the model spec, epoch
 * shuffling comes from a splitmix64 stream, and the CPU backend evaluates
 * kernels in a fixed order, so a (spec, seed) pair reproduces its report.
 */

import * as fs from "fs";
import * as tf from "@tensorflow/tfjs";

import { Dataset, slice } from "./cifar";
import { ModelSpec, buildModel } from "./model";

export interface TrainConfig {
  epochs: number;
  batchSize: number;
  lr: number;
  momentum: number;
  seed: number;
  trainCount: number;
  testCount: number;
}

export const TOY_TRAIN: TrainConfig = {
  epochs: 20,
  batchSize: 64,
  lr: 0.02,
  momentum: 0.9,
  seed: 0,
  trainCount: 5000,
  testCount: 1000,
};

export interface SchemeResult {
  scheme: string;
  dataset: string;
  accuracy: number;
  epochs: number;
  seconds: number;
}

class SplitMix64 {
  private state: bigint;
  private static MASK = (1n << 64n) - 1n;

  constructor(seed: number) {
    this.state = BigInt(seed) & SplitMix64.MASK;
  }

  next(): bigint {
    this.state = (this.state + 0x9e3779b97f4a7c15n) & SplitMix64.MASK;
    let z = this.state;
    z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & SplitMix64.MASK;
    z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & SplitMix64.MASK;
    return z ^ (z >> 31n);
  }

  below(bound: number): number {
    return Number(this.next() % BigInt(bound));
  }
}

function shuffledIndices(n: number, rng: SplitMix64): Int32Array {
  const idx = new Int32Array(n);
  for (let i = 0; i < n; i++) idx[i] = i;
  for (let i = n - 1; i > 0; i--) {
    const j = rng.below(i + 1);
    const t = idx[i];
    idx[i] = idx[j];
    idx[j] = t;
  }
  return idx;
}

function gatherBatch(ds: Dataset, idx: Int32Array, start: number, size: number):
    { x: tf.Tensor4D; y: tf.Tensor1D } {
  const count = Math.min(size, idx.length - start);
  const px = 32 * 32 * 3;
  const images = new Float32Array(count * px);
  const labels = new Int32Array(count);
  for (let b = 0; b < count; b++) {
    const src = idx[start + b];
    images.set(ds.images.subarray(src * px, (src + 1) * px), b * px);
    labels[b] = ds.labels[src];
  }
  return {
    x: tf.tensor4d(images, [count, 32, 32, 3]),
    y: tf.tensor1d(labels, "int32"),
  };
}

export function evaluate(model: tf.LayersModel, ds: Dataset, batchSize = 256): number {
  let correct = 0;
  const order = new Int32Array(ds.count);
  for (let i = 0; i < ds.count; i++) order[i] = i;
  for (let start = 0; start < ds.count; start += batchSize) {
    const { x, y } = gatherBatch(ds, order, start, batchSize);
    const hits = tf.tidy(() => {
      const logits = model.apply(x, { training: false }) as tf.Tensor2D;
      return logits.argMax(1).equal(y).sum();
    });
    correct += hits.dataSync()[0];
    x.dispose();
    y.dispose();
    hits.dispose();
  }
  return correct / ds.count;
}

export function trainModel(
  model: tf.LayersModel, train: Dataset, test: Dataset, cfg: TrainConfig,
  log: (msg: string) => void = () => undefined,
): { accuracy: number; seconds: number } {
  const t0 = Date.now();
  const optimizer = tf.train.momentum(cfg.lr, cfg.momentum);
  const rng = new SplitMix64(cfg.seed);
  const weights = model.trainableWeights.map((w) => w.read() as tf.Variable);
  for (let epoch = 1; epoch <= cfg.epochs; epoch++) {
    const order = shuffledIndices(train.count, rng);
    let lossSum = 0;
    let batches = 0;
    for (let start = 0; start < train.count; start += cfg.batchSize) {
      const { x, y } = gatherBatch(train, order, start, cfg.batchSize);
      const lossVal = optimizer.minimize(() => {
        const logits = model.apply(x, { training: true }) as tf.Tensor2D;
        const oneHot = tf.oneHot(y, train.numClasses);
        return tf.losses.softmaxCrossEntropy(oneHot, logits) as tf.Scalar;
      }, true, weights);
      lossSum += lossVal!.dataSync()[0];
      lossVal!.dispose();
      x.dispose();
      y.dispose();
      batches += 1;
    }
    log(`  epoch ${epoch}/${cfg.epochs}: mean loss ${(lossSum / batches).toFixed(4)}`);
  }
  const accuracy = evaluate(model, test);
  optimizer.dispose();
  return { accuracy, seconds: (Date.now() - t0) / 1000 };
}

/**
 * One model per scheme under identical hyperparameters; files must share the
 * record count and come from the same source data (the encryption tool
 * keeps labels and record order intact, which is asserted here).
 */
export function trainAndEval(
  datasets: Map<string, Dataset>, spec: ModelSpec, cfg: TrainConfig,
  log: (msg: string) => void = () => undefined,
): SchemeResult[] {
  const results: SchemeResult[] = [];
  let referenceLabels: Int32Array | null = null;
  for (const [scheme, ds] of datasets) {
    if (ds.count < cfg.trainCount + cfg.testCount) {
      throw new Error(
        `${scheme}: ${ds.count} records < train ${cfg.trainCount} + test ${cfg.testCount}`);
    }
    if (referenceLabels === null) {
      referenceLabels = ds.labels;
    } else if (ds.labels.length !== referenceLabels.length
               || !ds.labels.every((v, i) => v === referenceLabels![i])) {
      throw new Error(`${scheme}: labels differ from the first dataset; ` +
        "scheme files must be encryptions of the same source");
    }
    const train = slice(ds, 0, cfg.trainCount);
    const test = slice(ds, cfg.trainCount, cfg.testCount);
    log(`training scheme '${scheme}' (${cfg.trainCount}/${cfg.testCount}, ${cfg.epochs} epochs)`);
    const model = buildModel({ ...spec, classes: ds.numClasses, seed: cfg.seed });
    const { accuracy, seconds } = trainModel(model, train, test, cfg, log);
    log(`  '${scheme}' test accuracy ${accuracy.toFixed(4)} in ${seconds.toFixed(0)}s`);
    results.push({ scheme, dataset: `cifar${ds.numClasses}`, accuracy,
                   epochs: cfg.epochs, seconds });
    model.dispose();
  }
  return results;
}

export function reportCsv(results: SchemeResult[]): string {
  const rows = results.map((r) =>
    `${r.scheme},${r.dataset},${r.accuracy.toFixed(4)},${r.epochs},${r.seconds.toFixed(1)}`);
  return ["scheme,dataset,accuracy,epochs,seconds", ...rows].join("\n") + "\n";
}

export function writeReport(results: SchemeResult[], path: string): void {
  fs.writeFileSync(path, reportCsv(results));
}
