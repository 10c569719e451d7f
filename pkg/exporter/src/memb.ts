import { readFileSync } from 'node:fs';

/**
 * MEMB binary store (all integers little-endian):
 *   magic "MEMB" | version u16 | d u32 | count u64 |
 *   per entry: key length u16, UTF-8 key "visit_id|modality", d * float32.
 */
export const MAGIC = Buffer.from('MEMB', 'ascii');
export const VERSION = 1;

export interface StoreEntry {
  key: string; // "visit_id|modality"
  vector: Float32Array;
}

export function encodeStore(d: number, entries: StoreEntry[]): Buffer {
  const header = Buffer.alloc(18);
  MAGIC.copy(header, 0);
  header.writeUInt16LE(VERSION, 4);
  header.writeUInt32LE(d, 6);
  header.writeBigUInt64LE(BigInt(entries.length), 10);
  const chunks: Buffer[] = [header];
  for (const { key, vector } of entries) {
    if (vector.length !== d) {
      throw new Error(`entry ${key}: vector length ${vector.length}, store dimension ${d}`);
    }
    const keyBytes = Buffer.from(key, 'utf-8');
    if (keyBytes.length > 0xffff) throw new Error(`entry key too long: ${key.slice(0, 32)}...`);
    const lenBuf = Buffer.alloc(2);
    lenBuf.writeUInt16LE(keyBytes.length, 0);
    const vecBuf = Buffer.alloc(4 * d);
    for (let i = 0; i < d; i++) vecBuf.writeFloatLE(vector[i], 4 * i);
    chunks.push(lenBuf, keyBytes, vecBuf);
  }
  return Buffer.concat(chunks);
}

/** Reader used by the test suite; the reference importer lives in the
 * primary pipeline and is exercised against exported files separately. */
export function decodeStore(path: string): { d: number; entries: StoreEntry[] } {
  const data = readFileSync(path);
  if (data.length < 4 || !data.subarray(0, 4).equals(MAGIC)) {
    throw new Error(`${path}: bad magic`);
  }
  if (data.length < 18) throw new Error(`${path}: truncated header`);
  const version = data.readUInt16LE(4);
  if (version !== VERSION) throw new Error(`${path}: unsupported version ${version}`);
  const d = data.readUInt32LE(6);
  const count = Number(data.readBigUInt64LE(10));
  const entries: StoreEntry[] = [];
  let offset = 18;
  for (let i = 0; i < count; i++) {
    if (offset + 2 > data.length) throw new Error(`${path}: entry ${i} truncated`);
    const keyLen = data.readUInt16LE(offset);
    offset += 2;
    if (offset + keyLen + 4 * d > data.length) throw new Error(`${path}: entry ${i} truncated`);
    const key = data.subarray(offset, offset + keyLen).toString('utf-8');
    offset += keyLen;
    const vector = new Float32Array(d);
    for (let j = 0; j < d; j++) vector[j] = data.readFloatLE(offset + 4 * j);
    offset += 4 * d;
    entries.push({ key, vector });
  }
  if (offset !== data.length) throw new Error(`${path}: trailing bytes`);
  return { d, entries };
}
