// Usage: node dist/cli.js --notes notes.jsonl --out store.memb
//        [--model hash-v1] [--pooling mean|cls] [--max-tokens 512]
//        [--batch-size 64] [--dim 384]

import { exportFile } from './export.js';
import { DEFAULT_CONFIG, Pooling } from './types.js';

function flag(args: string[], name: string): string | undefined {
  const i = args.indexOf(name);
  return i !== -1 ? args[i + 1] : undefined;
}

async function main(): Promise<number> {
  const args = process.argv.slice(2);
  const notes = flag(args, '--notes');
  const out = flag(args, '--out');
  if (!notes || !out || args.includes('--help')) {
    console.error(
      'usage: cli.js --notes <notes.jsonl> --out <store.memb> ' +
        '[--model id] [--pooling mean|cls] [--max-tokens n] [--batch-size n] [--dim n]',
    );
    return notes && out ? 0 : 1;
  }
  const pooling = (flag(args, '--pooling') ?? DEFAULT_CONFIG.pooling) as Pooling;
  if (pooling !== 'mean' && pooling !== 'cls') {
    console.error(`unknown pooling ${pooling}`);
    return 1;
  }
  const result = await exportFile(notes, out, {
    model: flag(args, '--model') ?? DEFAULT_CONFIG.model,
    pooling,
    maxTokens: Number(flag(args, '--max-tokens') ?? DEFAULT_CONFIG.maxTokens),
    batchSize: Number(flag(args, '--batch-size') ?? DEFAULT_CONFIG.batchSize),
    dim: Number(flag(args, '--dim') ?? DEFAULT_CONFIG.dim),
  });
  console.log(
    `wrote ${result.entries} vectors (d=${result.hiddenSize}, encoder=${result.encoder}) to ${out}`,
  );
  return 0;
}

main().then(
  (code) => process.exit(code),
  (err) => {
    console.error(`export failed: ${err?.message ?? err}`);
    process.exit(2);
  },
);
