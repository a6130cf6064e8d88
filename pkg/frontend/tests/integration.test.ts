/**
 * End-to-end test against the real annotation service: spawns the Python
 * server, drives two annotators through the full guideline flow with the
 * wizard session, then checks exports, adjudication (via the CLI), and the
 * duplicate-resubmission guard.
 */

import { ChildProcess, execFile, spawn } from 'node:child_process';
import { mkdtempSync, readFileSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { promisify } from 'node:util';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api';
import { WizardSession } from '../src/app';
import type { Phase, RelevanceSubmission } from '../src/types';

const execFileAsync = promisify(execFile);

const PY = 'python3';
const REPO_ROOT = join(__dirname, '..', '..');
const PORT = 8931 + Math.floor(Math.random() * 500);
const BASE_URL = `http://127.0.0.1:${PORT}`;
const ANNOTATORS = ['ann-a', 'ann-b'] as const;

const TWEETS: Array<[string, string]> = [
  ['t0', 'kes baharu covid dilaporkan kkmputrajaya'],
  ['t1', 'jualan masker murah promo hari ini'],
  ['t2', 'saya kemarin positif covid dan sudah sembuh'],
  ['t3', 'katanya 5g itu nyebarin corona wkwk'],
  ['t4', 'semangat pagi semua, jaga kesehatan selalu'],
  ['t5', 'rsud menerima 7 pasien baru hari ini'],
  ['t6', 'vaksin mengandung mikrochip untuk pelacakan'],
  ['t7', 'pasien sembuh bertambah 1200 kemarin'],
  ['t8', 'obat herbal x katanya menyembuhkan covid'],
  ['t9', 'varian baru tidak terdeteksi tes pcr jenis lama'],
];

type Answer = [string, string];

const FULL_RELEVANT: Answer[] = [
  ['language', 'indonesian'],
  ['topic', 'relevant'],
  ['personal', 'false'],
  ['humor', 'false'],
  ['factual_claim', 'true'],
];

function relevanceScript(annotator: string): Record<string, Answer[]> {
  return {
    t0: [['language', 'non-indonesia']],
    t1: [
      ['language', 'indonesian'],
      ['topic', 'out-of-topic'],
    ],
    t2: [
      ['language', 'indonesian'],
      ['topic', 'relevant'],
      ['personal', 'true'],
      ['humor', 'false'],
      ['factual_claim', 'true'],
    ],
    t3: [
      ['language', 'indonesian'],
      ['topic', 'relevant'],
      ['personal', 'false'],
      ['humor', 'true'],
      ['factual_claim', 'true'],
    ],
    t4: [
      ['language', 'indonesian'],
      ['topic', 'relevant'],
      ['personal', 'false'],
      ['humor', 'false'],
      ['factual_claim', 'false'],
    ],
    t5: FULL_RELEVANT,
    t6: FULL_RELEVANT,
    t7: FULL_RELEVANT,
    t8: FULL_RELEVANT,
    // the annotators disagree on t9's relevance -> no consensus
    t9:
      annotator === 'ann-a'
        ? FULL_RELEVANT
        : [
            ['language', 'indonesian'],
            ['topic', 'out-of-topic'],
          ],
  };
}

const TRUTH_SCRIPT: Record<string, Record<string, string>> = {
  t5: { 'ann-a': 'true', 'ann-b': 'true' },
  t6: { 'ann-a': 'misinformation', 'ann-b': 'misinformation' },
  t7: { 'ann-a': 'true', 'ann-b': 'misinformation' },
  t8: { 'ann-a': 'not-sure', 'ann-b': 'not-sure' },
};

const EXPECTED_GOLD: Record<string, string> = {
  t0: 'irrelevant',
  t1: 'irrelevant',
  t2: 'irrelevant',
  t3: 'irrelevant',
  t4: 'irrelevant',
  t5: 'true',
  t6: 'misinformation',
  t7: 'no-consensus',
  t8: 'not-sure',
  t9: 'no-consensus',
};

let workdir: string;
let corpusPath: string;
let storePath: string;
let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 80; attempt++) {
    try {
      const response = await fetch(`${BASE_URL}/api/progress?phase=relevance`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`annotation service did not come up on :${PORT}`);
}

/** Run one annotator's queue to exhaustion with scripted answers. */
async function driveSession(
  annotator: string,
  phase: Phase,
  answersFor: (tweetId: string) => Answer[],
): Promise<{ conflicts: string[] }> {
  const conflicts: string[] = [];
  let done = false;
  const session: WizardSession = new WizardSession(
    new ApiClient(BASE_URL),
    annotator,
    phase,
    {
      showTask: () => {},
      showCompletion: () => {
        done = true;
      },
      showConflict: (detail) => conflicts.push(detail),
      showError: (message) => {
        throw new Error(`wizard error for ${annotator}: ${message}`);
      },
    },
  );
  await session.loadNext();
  let guard = 0;
  while (!done && session.state !== null) {
    if (guard++ > 200) throw new Error('session did not terminate');
    const tweetId = session.state.task.tweet.id;
    for (const [field, value] of answersFor(tweetId)) {
      await session.select(field, value);
      if (done || session.state === null || session.state.task.tweet.id !== tweetId) break;
    }
  }
  return { conflicts };
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), 'wizard-e2e-'));
  corpusPath = join(workdir, 'corpus.jsonl');
  storePath = join(workdir, 'log.jsonl');
  const lines = TWEETS.map(([id, text]) =>
    JSON.stringify({ id, text, urls: [], date: '2020-08-01' }),
  );
  writeFileSync(corpusPath, lines.join('\n') + '\n');

  server = spawn(
    PY,
    [
      '-m', 'misinfo.cli', 'annotate', 'serve',
      '--corpus', corpusPath,
      '--store', storePath,
      '--annotators', ANNOTATORS.join(','),
      '--port', String(PORT),
    ],
    { cwd: REPO_ROOT, stdio: ['ignore', 'pipe', 'pipe'] },
  );
  await waitForServer();
}, 60_000);

afterAll(() => {
  server?.kill();
});

describe('guideline wizard against the live service', () => {
  it('walks both annotators through both phases and adjudicates', async () => {
    for (const annotator of ANNOTATORS) {
      const script = relevanceScript(annotator);
      await driveSession(annotator, 'relevance', (tweetId) => script[tweetId]);
    }

    const api = new ApiClient(BASE_URL);
    const relevanceProgress = await api.progress('relevance');
    expect(relevanceProgress.fully_annotated).toBe(10);

    // the truth pool contains only tweets adjudicated relevant
    const truthProgress = await api.progress('truth');
    expect(truthProgress.total).toBe(4);

    for (const annotator of ANNOTATORS) {
      await driveSession(annotator, 'truth', (tweetId) => [
        ['truth', TRUTH_SCRIPT[tweetId][annotator]],
      ]);
    }

    // exports carry the exact guideline column layout
    const relevanceCsv = await api.exportCsv('relevance');
    const relevanceLines = relevanceCsv.trim().split(/\r?\n/);
    expect(relevanceLines[0]).toBe(
      'tweet_url,text,urls,date,filter,personal,humor,factual_claim',
    );
    expect(relevanceLines).toHaveLength(1 + 20);

    const truthCsv = await api.exportCsv('truth');
    const truthLines = truthCsv.trim().split(/\r?\n/);
    expect(truthLines[0]).toBe('tweet_url,text,urls,date,truth');
    expect(truthLines).toHaveLength(1 + 8);

    // adjudication through the CLI reproduces the expected gold labels
    const goldPath = join(workdir, 'gold.csv');
    await execFileAsync(
      PY,
      [
        '-m', 'misinfo.cli', 'dataset', 'export',
        '--corpus', corpusPath,
        '--store', storePath,
        '--annotators', ANNOTATORS.join(','),
        '--out', goldPath,
      ],
      { cwd: REPO_ROOT },
    );
    const gold: Record<string, string> = {};
    for (const line of readFileSync(goldPath, 'utf-8').trim().split(/\r?\n/).slice(1)) {
      const [tweetId, label] = line.split(',');
      gold[tweetId] = label;
    }
    expect(gold).toEqual(EXPECTED_GOLD);
  }, 120_000);

  it('rejects a duplicate resubmission after a page reload with 409', async () => {
    // a reloaded page replays its last POST: same (tweet, annotator, phase)
    const api = new ApiClient(BASE_URL);
    const before = (await api.exportCsv('relevance')).trim().split(/\r?\n/).length;

    const replayed: RelevanceSubmission = {
      phase: 'relevance',
      tweet_id: 't0',
      annotator_id: 'ann-a',
      filter: 'non-indonesia',
    };
    const outcome = await api.submit(replayed);
    expect(outcome.kind).toBe('duplicate');

    const after = (await api.exportCsv('relevance')).trim().split(/\r?\n/).length;
    expect(after).toBe(before);
  }, 30_000);

  it('serves no further tasks once the pool is exhausted', async () => {
    const api = new ApiClient(BASE_URL);
    expect(await api.nextTask('ann-a', 'relevance')).toBeNull();
    expect(await api.nextTask('ann-a', 'truth')).toBeNull();
  }, 30_000);
});
