/**
 * CIFAR binary readers. These files are the only interface to the encryption
 * tool: plain or encrypted, the byte layout is identical (3073-byte records
 * of label + planar RGB for CIFAR-10, 3074 with a coarse label in front for
 * CIFAR-100), so the trainer never needs to know about keys.
 */

import * as fs from "fs";

export interface Dataset {
  /** NHWC float32 pixels in [0, 1], length n*32*32*3 */
  images: Float32Array;
  labels: Int32Array;
  count: number;
  numClasses: number;
}

const CIFAR10_RECORD = 3073;
const CIFAR100_RECORD = 3074;

function parse(buf: Buffer, recordSize: number, labelOffset: number, numClasses: number): Dataset {
  if (buf.length % recordSize !== 0) {
    throw new Error(`file length ${buf.length} is not a multiple of ${recordSize}`);
  }
  const count = buf.length / recordSize;
  const images = new Float32Array(count * 32 * 32 * 3);
  const labels = new Int32Array(count);
  const pixelOffset = labelOffset + 1;
  for (let i = 0; i < count; i++) {
    const base = i * recordSize;
    const label = buf[base + labelOffset];
    if (label >= numClasses) {
      throw new Error(`record ${i}: label ${label} out of range`);
    }
    labels[i] = label;
    // planar RGB -> interleaved NHWC
    for (let p = 0; p < 1024; p++) {
      const dst = (i * 1024 + p) * 3;
      images[dst] = buf[base + pixelOffset + p] / 255;
      images[dst + 1] = buf[base + pixelOffset + 1024 + p] / 255;
      images[dst + 2] = buf[base + pixelOffset + 2048 + p] / 255;
    }
  }
  return { images, labels, count, numClasses };
}

export function readCifar10(path: string): Dataset {
  return parse(fs.readFileSync(path), CIFAR10_RECORD, 0, 10);
}

export function readCifar100(path: string): Dataset {
  return parse(fs.readFileSync(path), CIFAR100_RECORD, 1, 100);
}

export function slice(ds: Dataset, start: number, count: number): Dataset {
  if (start + count > ds.count) {
    throw new Error(`slice [${start}, ${start + count}) exceeds ${ds.count} records`);
  }
  const px = 32 * 32 * 3;
  return {
    images: ds.images.slice(start * px, (start + count) * px),
    labels: ds.labels.slice(start, start + count),
    count,
    numClasses: ds.numClasses,
  };
}
