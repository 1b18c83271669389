import { execFileSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Dataset, readCifar10 } from "../src/cifar";
import { ModelSpec } from "../src/model";
import { TrainConfig, reportCsv, trainAndEval } from "../src/train";

/**
 * Fixture data comes through the encryption tool's public surfaces only:
 * the synthetic-corpus generator emits a CIFAR-format file and the CLI
 * encrypts it per scheme.
 */

const ROOT = path.resolve(__dirname, "..", "..");
let dir: string;
let plainPath: string;
const encrypted: Record<string, string> = {};

const TINY_SPEC: ModelSpec = {
  adaptation: { blockSize: 4, channels: 16, ninLayers: 1 },
  pyramid: { baseWidth: 8, alpha: 8, blocks: 2 },
  classes: 10,
  seed: 0,
};

const SMOKE_CFG: TrainConfig = {
  epochs: 8,
  batchSize: 64,
  lr: 0.05,
  momentum: 0.9,
  seed: 0,
  trainCount: 256,
  testCount: 64,
};

function py(args: string[]): void {
  execFileSync("python3", args, { cwd: ROOT, stdio: "pipe" });
}

beforeAll(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "repro-test-"));
  plainPath = path.join(dir, "plain.bin");
  py(["tools/make_synth_cifar.py", "--count", "320", "--seed", "7", "-o", plainPath]);
  for (const scheme of ["proposed", "catmap"]) {
    const key = path.join(dir, `${scheme}.key`);
    const out = path.join(dir, `${scheme}.bin`);
    py(["-m", "blockveil.cli", "keygen", "--seed", "1234", "--scheme", scheme, "-o", key]);
    py(["-m", "blockveil.cli", "encrypt", "--key", key, "--in", plainPath, "-o", out]);
    encrypted[scheme] = out;
  }
}, 120_000);

afterAll(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

describe("cifar reader", () => {
  it("parses CLI-emitted records", () => {
    const ds = readCifar10(plainPath);
    expect(ds.count).toBe(320);
    expect(ds.numClasses).toBe(10);
    expect(Math.max(...ds.labels)).toBeLessThan(10);
    expect(Math.max(...Array.from(ds.images.slice(0, 3072)))).toBeLessThanOrEqual(1);
  });

  it("rejects truncated files", () => {
    const bad = path.join(dir, "bad.bin");
    fs.writeFileSync(bad, Buffer.alloc(3072));
    expect(() => readCifar10(bad)).toThrow(/multiple/);
  });

  it("encrypted files keep labels and order", () => {
    const plain = readCifar10(plainPath);
    const prop = readCifar10(encrypted.proposed);
    expect(Array.from(prop.labels)).toEqual(Array.from(plain.labels));
    expect(prop.images).not.toEqual(plain.images);
  });
});

describe("training smoke", () => {
  it("a short run on plain and encrypted data beats chance and reports cleanly", () => {
    const datasets = new Map<string, Dataset>([
      ["plain", readCifar10(plainPath)],
      ["proposed", readCifar10(encrypted.proposed)],
    ]);
    const results = trainAndEval(datasets, TINY_SPEC, SMOKE_CFG);
    expect(results).toHaveLength(2);
    expect(results.map((r) => r.scheme)).toEqual(["plain", "proposed"]);
    for (const r of results) {
      expect(r.accuracy).toBeGreaterThan(0.1);
      expect(r.epochs).toBe(SMOKE_CFG.epochs);
    }
    const csv = reportCsv(results);
    const lines = csv.trim().split("\n");
    expect(lines[0]).toBe("scheme,dataset,accuracy,epochs,seconds");
    expect(lines[1]).toMatch(/^plain,cifar10,0\.\d{4},8,\d+/);
  }, 600_000);

  it("is deterministic for a fixed seed", () => {
    const cfg = { ...SMOKE_CFG, epochs: 1, trainCount: 64, testCount: 32 };
    const accs: number[] = [];
    for (let i = 0; i < 2; i++) {
      const datasets = new Map<string, Dataset>([["plain", readCifar10(plainPath)]]);
      accs.push(trainAndEval(datasets, TINY_SPEC, cfg)[0].accuracy);
    }
    expect(accs[0]).toBe(accs[1]);
  }, 600_000);

  it("rejects scheme files with mismatched labels", () => {
    const shuffled = path.join(dir, "other.bin");
    py(["tools/make_synth_cifar.py", "--count", "320", "--seed", "8", "-o", shuffled]);
    const datasets = new Map<string, Dataset>([
      ["plain", readCifar10(plainPath)],
      ["proposed", readCifar10(shuffled)],
    ]);
    const cfg = { ...SMOKE_CFG, epochs: 1, trainCount: 64, testCount: 32 };
    expect(() => trainAndEval(datasets, TINY_SPEC, cfg)).toThrow(/labels differ/);
  }, 600_000);

  it("rejects a split larger than the file", () => {
    const datasets = new Map<string, Dataset>([["plain", readCifar10(plainPath)]]);
    const cfg = { ...SMOKE_CFG, trainCount: 5000, testCount: 1000 };
    expect(() => trainAndEval(datasets, TINY_SPEC, cfg)).toThrow(/records/);
  });
});
