import { readFileSync } from 'node:fs';

import { NoteRecord, TokenizationFailure } from './types.js';

/** Read a pseudo-note JSONL file: one {visit_id, modality, text} per line. */
export function readNotes(path: string): NoteRecord[] {
  const raw = readFileSync(path, 'utf-8');
  const notes: NoteRecord[] = [];
  const lines = raw.split('\n');
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let obj: unknown;
    try {
      obj = JSON.parse(line);
    } catch (err) {
      throw new TokenizationFailure(i + 1, `invalid JSON: ${(err as Error).message}`);
    }
    const note = obj as Partial<NoteRecord>;
    if (
      typeof note.visit_id !== 'string' ||
      typeof note.modality !== 'string' ||
      typeof note.text !== 'string'
    ) {
      throw new TokenizationFailure(i + 1, 'note needs visit_id, modality, text strings');
    }
    notes.push({ visit_id: note.visit_id, modality: note.modality, text: note.text });
  }
  return notes;
}
