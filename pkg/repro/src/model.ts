/**
 * Block-adaptation network plus a reduced-depth pyramidal residual network.
 *
 * The adaptation front end handles block-wise encrypted inputs: an MxM
 * convolution with MxM stride sees each encrypted block under one shared
 * transform, a stack of 1x1 mixing layers refines the per-block embedding,
 * and a sub-pixel (depth-to-space) rearrangement restores the original
 * resolution. Any classifier can follow; here a small pyramidal residual
 * net with linearly growing widths and zero-padded identity shortcuts.
 */

import * as tf from "@tensorflow/tfjs";

export interface AdaptationSpec {
  /** encryption block size M; also the sub-pixel upscale factor */
  blockSize: number;
  /** first-conv output channels; must be divisible by blockSize^2 */
  channels: number;
  /** number of 1x1 mixing layers after the block embedding */
  ninLayers: number;
}

export interface PyramidSpec {
  /** width of the stem convolution */
  baseWidth: number;
  /** total channel growth distributed linearly across the blocks */
  alpha: number;
  /** residual block count */
  blocks: number;
}

export interface ModelSpec {
  adaptation: AdaptationSpec;
  pyramid: PyramidSpec;
  classes: number;
  seed: number;
}

export const TOY_SPEC: ModelSpec = {
  adaptation: { blockSize: 4, channels: 64, ninLayers: 2 },
  pyramid: { baseWidth: 16, alpha: 32, blocks: 6 },
  classes: 10,
  seed: 0,
};

/** channel-to-space rearrangement (sub-pixel upsampling) as a layer */
class SubPixel extends tf.layers.Layer {
  static className = "SubPixel";
  private factor: number;

  constructor(factor: number) {
    super({ name: `sub_pixel_x${factor}` });
    this.factor = factor;
  }

  override computeOutputShape(inputShape: tf.Shape): tf.Shape {
    const [b, h, w, c] = inputShape as number[];
    return [b, h! * this.factor, w! * this.factor, c! / (this.factor * this.factor)];
  }

  override call(inputs: tf.Tensor | tf.Tensor[]): tf.Tensor {
    const x = (Array.isArray(inputs) ? inputs[0] : inputs) as tf.Tensor4D;
    // depth-to-space as reshape/transpose so gradients exist on every backend
    const [b, h, w, c] = x.shape;
    const r = this.factor;
    const cOut = c / (r * r);
    return tf.tidy(() =>
      x.reshape([b, h, w, r, r, cOut])
        .transpose([0, 1, 3, 2, 4, 5])
        .reshape([b, h * r, w * r, cOut]));
  }
}

/** zero-pads the channel axis so identity shortcuts can grow in width */
class PadChannels extends tf.layers.Layer {
  static className = "PadChannels";
  private extra: number;

  constructor(extra: number, name: string) {
    super({ name });
    this.extra = extra;
  }

  override computeOutputShape(inputShape: tf.Shape): tf.Shape {
    const [b, h, w, c] = inputShape as number[];
    return [b, h, w, c! + this.extra];
  }

  override call(inputs: tf.Tensor | tf.Tensor[]): tf.Tensor {
    const x = Array.isArray(inputs) ? inputs[0] : inputs;
    return tf.pad(x, [[0, 0], [0, 0], [0, 0], [0, this.extra]]);
  }
}

function conv(filters: number, kernel: number, stride: number, seed: number, name: string) {
  return tf.layers.conv2d({
    filters,
    kernelSize: kernel,
    strides: stride,
    padding: "same",
    useBias: false,
    kernelInitializer: tf.initializers.heNormal({ seed }),
    name,
  });
}

function adaptationFrontEnd(x: tf.SymbolicTensor, spec: AdaptationSpec, seed: number): tf.SymbolicTensor {
  const m = spec.blockSize;
  const r2 = m * m;
  if (spec.channels % r2 !== 0) {
    throw new Error(
      `adaptation channels ${spec.channels} not divisible by blockSize^2 = ${r2}`);
  }
  let y = tf.layers.conv2d({
    filters: spec.channels,
    kernelSize: m,
    strides: m,
    padding: "valid",
    // seed 0 is falsy and would fall back to unseeded init
    kernelInitializer: tf.initializers.heNormal({ seed: seed + 1 }),
    name: "block_embed",
  }).apply(x) as tf.SymbolicTensor;
  y = tf.layers.reLU({ name: "block_embed_relu" }).apply(y) as tf.SymbolicTensor;
  for (let i = 0; i < spec.ninLayers; i++) {
    y = conv(spec.channels, 1, 1, seed + 1 + i, `nin_${i}`).apply(y) as tf.SymbolicTensor;
    y = tf.layers.reLU({ name: `nin_${i}_relu` }).apply(y) as tf.SymbolicTensor;
  }
  return new SubPixel(m).apply(y) as tf.SymbolicTensor;
}

function pyramidBlock(
  x: tf.SymbolicTensor, outCh: number, stride: number, seed: number, idx: number,
): tf.SymbolicTensor {
  const inCh = (x.shape[x.shape.length - 1] as number);
  let y = tf.layers.batchNormalization({ name: `blk${idx}_bn1` }).apply(x) as tf.SymbolicTensor;
  y = conv(outCh, 3, stride, seed, `blk${idx}_conv1`).apply(y) as tf.SymbolicTensor;
  y = tf.layers.batchNormalization({ name: `blk${idx}_bn2` }).apply(y) as tf.SymbolicTensor;
  y = tf.layers.reLU({ name: `blk${idx}_relu` }).apply(y) as tf.SymbolicTensor;
  y = conv(outCh, 3, 1, seed + 1, `blk${idx}_conv2`).apply(y) as tf.SymbolicTensor;
  y = tf.layers.batchNormalization({ name: `blk${idx}_bn3` }).apply(y) as tf.SymbolicTensor;

  let shortcut = x;
  if (stride > 1) {
    shortcut = tf.layers.averagePooling2d({
      poolSize: stride, strides: stride, name: `blk${idx}_pool`,
    }).apply(shortcut) as tf.SymbolicTensor;
  }
  if (outCh > inCh) {
    shortcut = new PadChannels(outCh - inCh, `blk${idx}_pad`).apply(shortcut) as tf.SymbolicTensor;
  }
  return tf.layers.add({ name: `blk${idx}_add` }).apply([y, shortcut]) as tf.SymbolicTensor;
}

export function buildModel(spec: ModelSpec): tf.LayersModel {
  const input = tf.input({ shape: [32, 32, 3], name: "pixels" });
  let y = adaptationFrontEnd(input, spec.adaptation, spec.seed);
  y = conv(spec.pyramid.baseWidth, 3, 1, spec.seed + 100, "stem").apply(y) as tf.SymbolicTensor;
  const n = spec.pyramid.blocks;
  const downsampleAt = new Set([Math.ceil(n / 3), Math.ceil((2 * n) / 3)]);
  for (let k = 1; k <= n; k++) {
    const outCh = spec.pyramid.baseWidth + Math.round((spec.pyramid.alpha * k) / n);
    const stride = downsampleAt.has(k) ? 2 : 1;
    y = pyramidBlock(y, outCh, stride, spec.seed + 200 + 2 * k, k);
  }
  y = tf.layers.batchNormalization({ name: "head_bn" }).apply(y) as tf.SymbolicTensor;
  y = tf.layers.reLU({ name: "head_relu" }).apply(y) as tf.SymbolicTensor;
  y = tf.layers.globalAveragePooling2d({ name: "head_pool" }).apply(y) as tf.SymbolicTensor;
  // normal-distribution initializers honor their seed in tfjs; the uniform
  // ones silently ignore it, which breaks run-to-run reproducibility
  const logits = tf.layers.dense({
    units: spec.classes,
    kernelInitializer: tf.initializers.heNormal({ seed: spec.seed + 999 }),
    name: "head_dense",
  }).apply(y) as tf.SymbolicTensor;
  return tf.model({ inputs: input, outputs: logits, name: "blockveil_repro" });
}

/** adaptation-only model, mainly to verify the spec's shape invariants */
export function buildAdaptation(spec: AdaptationSpec, seed = 0): tf.LayersModel {
  const input = tf.input({ shape: [32, 32, 3], name: "pixels" });
  const y = adaptationFrontEnd(input, spec, seed);
  return tf.model({ inputs: input, outputs: y, name: "adaptation_only" });
}
