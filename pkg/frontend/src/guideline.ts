/**
 * The questions the wizard asks, one step at a time, with the inline
 * instructions annotators see. Option order fixes the 1..n keyboard
 * shortcuts.
 */

export interface Option {
  value: string;
  label: string;
  hint?: string;
}

export interface Question {
  field: string;
  prompt: string;
  options: Option[];
}

export interface StepSpec {
  id: 'language' | 'topic' | 'claim-flags' | 'truth';
  title: string;
  instructions: string;
  questions: Question[];
}

export const LANGUAGE_STEP: StepSpec = {
  id: 'language',
  title: 'Step 1 — Language',
  instructions:
    'Keep the tweet only if it is written in Indonesian, or code-mixed with ' +
    'Indonesian as the dominant language. Watch out for Malay posts that ' +
    'look similar.',
  questions: [
    {
      field: 'language',
      prompt: 'Is the tweet (mostly) written in Indonesian?',
      options: [
        { value: 'indonesian', label: 'Yes, Indonesian' },
        { value: 'non-indonesia', label: 'No, another language' },
      ],
    },
  ],
};

export const TOPIC_STEP: StepSpec = {
  id: 'topic',
  title: 'Step 2 — Topic',
  instructions:
    'On-topic tweets discuss the pandemic situation, science/vaccines/' +
    'treatments, official pandemic policies, or sectors the pandemic ' +
    'affects. Political campaigning or criticism, hashtag hijacking, and ' +
    'advertisements are out of topic.',
  questions: [
    {
      field: 'topic',
      prompt: 'Is the main topic pandemic-related?',
      options: [
        { value: 'relevant', label: 'Yes, on topic' },
        { value: 'out-of-topic', label: 'No, out of topic' },
      ],
    },
  ],
};

export const CLAIM_STEP: StepSpec = {
  id: 'claim-flags',
  title: 'Step 3 — Verifiable factual claim',
  instructions:
    'A verifiable factual claim states something checkable against public ' +
    'information: a statement, a quantity, a verifiable prediction, a law/' +
    'rule/procedure, or a correlation/causation. Personal experiences and ' +
    'jokes are excluded even when they mention facts.',
  questions: [
    {
      field: 'personal',
      prompt: 'Does the tweet describe a personal experience?',
      options: [
        { value: 'true', label: 'Yes, personal' },
        { value: 'false', label: 'No' },
      ],
    },
    {
      field: 'humor',
      prompt: 'Is the tweet written as humor?',
      options: [
        { value: 'true', label: 'Yes, humor' },
        { value: 'false', label: 'No' },
      ],
    },
    {
      field: 'factual_claim',
      prompt: 'Does the tweet contain a verifiable factual claim?',
      options: [
        { value: 'true', label: 'Yes' },
        { value: 'not-sure', label: 'Not sure' },
        { value: 'false', label: 'No' },
      ],
    },
  ],
};

export const TRUTH_STEP: StepSpec = {
  id: 'truth',
  title: 'Truth verdict',
  instructions:
    'Search for the claim with a trusted engine and compare against ' +
    'reputable media or medical institutions. Judge only the text content. ' +
    'Misinformation covers claims that are partly or completely false, ' +
    'misleading/clickbait, or unproven rumors.',
  questions: [
    {
      field: 'truth',
      prompt: 'What is the verdict on the claim?',
      options: [
        { value: 'true', label: 'True' },
        { value: 'misinformation', label: 'Misinformation' },
        { value: 'not-sure', label: 'Not sure' },
        { value: 'need-expert', label: 'Needs an expert' },
      ],
    },
  ],
};

export const STEP_SPECS: Record<StepSpec['id'], StepSpec> = {
  language: LANGUAGE_STEP,
  topic: TOPIC_STEP,
  'claim-flags': CLAIM_STEP,
  truth: TRUTH_STEP,
};
