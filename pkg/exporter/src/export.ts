import { renameSync, writeFileSync } from 'node:fs';

import { loadEncoder, TextEncoder } from './encoder.js';
import { readNotes } from './jsonl.js';
import { encodeStore, StoreEntry } from './memb.js';
import { DEFAULT_CONFIG, ExporterConfig, NoteRecord } from './types.js';

export interface ExportResult {
  entries: number;
  hiddenSize: number;
  encoder: string;
}

export async function exportNotes(
  notes: NoteRecord[],
  outPath: string,
  config: Partial<ExporterConfig> = {},
  encoder?: TextEncoder,
): Promise<ExportResult> {
  const cfg: ExporterConfig = { ...DEFAULT_CONFIG, ...config };
  const enc = encoder ?? (await loadEncoder(cfg));

  const entries: StoreEntry[] = [];
  const seen = new Set<string>();
  for (let start = 0; start < notes.length; start += cfg.batchSize) {
    const batch = notes.slice(start, start + cfg.batchSize);
    const vectors = await enc.encode(
      batch.map((n) => n.text),
      cfg.pooling,
    );
    batch.forEach((note, i) => {
      const key = `${note.visit_id}|${note.modality}`;
      if (seen.has(key)) throw new Error(`duplicate note key ${key}`);
      seen.add(key);
      entries.push({ key, vector: vectors[i] });
    });
  }

  const payload = encodeStore(enc.hiddenSize, entries);
  const tmpPath = `${outPath}.tmp-${process.pid}`;
  writeFileSync(tmpPath, payload);
  renameSync(tmpPath, outPath); // atomic publish
  return { entries: entries.length, hiddenSize: enc.hiddenSize, encoder: enc.name };
}

export async function exportFile(
  notesPath: string,
  outPath: string,
  config: Partial<ExporterConfig> = {},
): Promise<ExportResult> {
  return exportNotes(readNotes(notesPath), outPath, config);
}
