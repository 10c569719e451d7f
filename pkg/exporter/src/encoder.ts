import { createHash } from 'node:crypto';

import { ExporterConfig, ModelLoadFailure, Pooling } from './types.js';

/** A frozen text encoder: batch of texts in, one pooled vector per text out. */
export interface TextEncoder {
  readonly hiddenSize: number;
  readonly name: string;
  encode(texts: string[], pooling: Pooling): Promise<Float32Array[]>;
}

function tokenize(text: string, maxTokens: number): string[] {
  const tokens = text.toLowerCase().match(/\w+|[^\w\s]/gu) ?? [];
  return tokens.slice(0, maxTokens);
}

/** Deterministic unit vector derived from a string via SHA-256-seeded PRNG. */
function stateFor(key: string, dim: number): Float32Array {
  const seedBytes = createHash('sha256').update(key, 'utf-8').digest();
  // xorshift128 seeded from the digest; identical across platforms
  let s0 = seedBytes.readUInt32LE(0) || 1;
  let s1 = seedBytes.readUInt32LE(4) || 2;
  let s2 = seedBytes.readUInt32LE(8) || 3;
  let s3 = seedBytes.readUInt32LE(12) || 4;
  const next = () => {
    const t = s1 << 9;
    s2 ^= s0;
    s3 ^= s1;
    s1 ^= s2;
    s0 ^= s3;
    s2 ^= t;
    s3 = (s3 << 11) | (s3 >>> 21);
    return (s0 >>> 0) / 0x100000000;
  };
  const vec = new Float32Array(dim);
  let norm = 0;
  for (let i = 0; i < dim; i++) {
    const v = next() * 2 - 1;
    vec[i] = v;
    norm += v * v;
  }
  norm = Math.sqrt(norm);
  for (let i = 0; i < dim; i++) vec[i] /= norm;
  return vec;
}

/**
 * Built-in offline encoder: every token maps to a fixed unit state, the
 * synthetic [CLS] state hashes the whole truncated input. It stands in for a
 * pretrained model where weights cannot be downloaded; the store format,
 * batching, pooling, and truncation paths are identical either way.
 */
export class HashStateEncoder implements TextEncoder {
  readonly name = 'hash-v1';

  constructor(
    readonly hiddenSize: number,
    private readonly maxTokens: number,
  ) {}

  async encode(texts: string[], pooling: Pooling): Promise<Float32Array[]> {
    return texts.map((text) => {
      const tokens = tokenize(text, this.maxTokens);
      if (pooling === 'cls') {
        return stateFor(`[CLS]${tokens.join(' ')}`, this.hiddenSize);
      }
      const pooled = new Float32Array(this.hiddenSize);
      if (tokens.length === 0) return pooled;
      for (const token of tokens) {
        const state = stateFor(`tok${token}`, this.hiddenSize);
        for (let i = 0; i < this.hiddenSize; i++) pooled[i] += state[i];
      }
      for (let i = 0; i < this.hiddenSize; i++) pooled[i] /= tokens.length;
      return pooled;
    });
  }
}

/** Adapter over @huggingface/transformers feature extraction, when installed. */
class TransformersEncoder implements TextEncoder {
  constructor(
    readonly name: string,
    readonly hiddenSize: number,
    private readonly pipe: (texts: string[], opts: object) => Promise<{ data: Float32Array; dims: number[] }>,
  ) {}

  async encode(texts: string[], pooling: Pooling): Promise<Float32Array[]> {
    const output = await this.pipe(texts, {
      pooling: pooling === 'cls' ? 'cls' : 'mean',
      normalize: false,
    });
    const dim = output.dims[output.dims.length - 1];
    const out: Float32Array[] = [];
    for (let i = 0; i < texts.length; i++) {
      out.push(output.data.slice(i * dim, (i + 1) * dim));
    }
    return out;
  }
}

export async function loadEncoder(config: ExporterConfig): Promise<TextEncoder> {
  if (config.model === 'hash-v1') {
    return new HashStateEncoder(config.dim, config.maxTokens);
  }
  let pipeline: (task: string, model: string) => Promise<any>;
  const spec = '@huggingface/transformers';
  try {
    ({ pipeline } = await import(spec));
  } catch (err) {
    throw new ModelLoadFailure(
      `model "${config.model}" needs ${spec} (npm install ${spec}): ${(err as Error).message}`,
    );
  }
  try {
    const pipe = await pipeline('feature-extraction', config.model);
    const probe = await pipe(['probe'], { pooling: 'mean', normalize: false });
    const hidden = probe.dims[probe.dims.length - 1];
    return new TransformersEncoder(config.model, hidden, pipe);
  } catch (err) {
    throw new ModelLoadFailure(`cannot load ${config.model}: ${(err as Error).message}`);
  }
}
