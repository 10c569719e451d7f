export type Pooling = 'mean' | 'cls';

export interface ExporterConfig {
  /** Encoder identifier. "hash-v1" is the built-in deterministic encoder;
   * anything else is treated as a Hugging Face model id and requires
   * @huggingface/transformers to be installed. */
  model: string;
  pooling: Pooling;
  /** Inputs longer than this are truncated by the encoder's own tokenizer. */
  maxTokens: number;
  batchSize: number;
  /** Hidden size for the built-in encoder (real encoders report their own). */
  dim: number;
}

export const DEFAULT_CONFIG: ExporterConfig = {
  model: 'hash-v1',
  pooling: 'mean',
  maxTokens: 512,
  batchSize: 64,
  dim: 384,
};

export interface NoteRecord {
  visit_id: string;
  modality: string;
  text: string;
}

export class ModelLoadFailure extends Error {}

export class TokenizationFailure extends Error {
  constructor(public readonly line: number, message: string) {
    super(`line ${line}: ${message}`);
  }
}
