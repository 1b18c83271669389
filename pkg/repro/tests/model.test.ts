import * as tf from "@tensorflow/tfjs";
import { describe, expect, it } from "vitest";

import { buildAdaptation, buildModel, TOY_SPEC } from "../src/model";

describe("adaptation front end", () => {
  it("restores 32x32 resolution with channels/M^2 maps", () => {
    const model = buildAdaptation({ blockSize: 4, channels: 64, ninLayers: 2 });
    const out = model.predict(tf.zeros([2, 32, 32, 3])) as tf.Tensor;
    expect(out.shape).toEqual([2, 32, 32, 4]);
    out.dispose();
    model.dispose();
  });

  it("rejects channel counts the sub-pixel step cannot divide", () => {
    expect(() => buildAdaptation({ blockSize: 4, channels: 60, ninLayers: 1 }))
      .toThrow(/not divisible/);
  });

  it("halves to an 8x8 grid before upsampling", () => {
    const model = buildAdaptation({ blockSize: 4, channels: 32, ninLayers: 0 });
    const embed = model.getLayer("block_embed");
    expect(embed.outputShape).toEqual([null, 8, 8, 32]);
    model.dispose();
  });
});

describe("full model", () => {
  it("maps a batch to one logit row per class", () => {
    const spec = {
      adaptation: { blockSize: 4, channels: 16, ninLayers: 1 },
      pyramid: { baseWidth: 8, alpha: 8, blocks: 2 },
      classes: 10,
      seed: 0,
    };
    const model = buildModel(spec);
    const out = model.predict(tf.zeros([8, 32, 32, 3])) as tf.Tensor;
    expect(out.shape).toEqual([8, 10]);
    out.dispose();
    model.dispose();
  });

  it("grows pyramid widths linearly", () => {
    const model = buildModel(TOY_SPEC);
    const last = model.getLayer("blk6_conv2");
    const first = model.getLayer("blk1_conv1");
    expect(first.getWeights()[0].shape[3]).toBe(16 + Math.round(32 / 6));
    expect(last.getWeights()[0].shape[3]).toBe(16 + 32);
    model.dispose();
  });

  it("initializes identically for identical seeds", () => {
    const a = buildModel({ ...TOY_SPEC, seed: 5 });
    const b = buildModel({ ...TOY_SPEC, seed: 5 });
    const wa = a.getLayer("block_embed").getWeights()[0].dataSync();
    const wb = b.getLayer("block_embed").getWeights()[0].dataSync();
    expect(Array.from(wa.slice(0, 16))).toEqual(Array.from(wb.slice(0, 16)));
    a.dispose();
    b.dispose();
  });
});
