/**
 * Wizard state machine for one annotation task.
 *
 * Steps are strictly ordered (language -> topic -> claim questions in the
 * relevance phase; a single truth step in the truth phase). Short-circuit
 * answers complete the task early, and a submission can only be built once
 * every required answer is present, so the client cannot produce a record
 * the server would reject as malformed.
 */

import { CLAIM_STEP, STEP_SPECS, StepSpec } from './guideline';
import type { FactualClaimValue, Submission, Task, TruthValue } from './types';

export type StepId = 'language' | 'topic' | 'claim-flags' | 'truth' | 'complete';

export interface WizardState {
  readonly task: Task;
  readonly step: StepId;
  readonly answers: Readonly<Record<string, string>>;
}

export class WizardError extends Error {}

export function startWizard(task: Task): WizardState {
  return {
    task,
    step: task.phase === 'relevance' ? 'language' : 'truth',
    answers: {},
  };
}

/** The step spec to render, or null once the task is complete. */
export function currentStep(state: WizardState): StepSpec | null {
  return state.step === 'complete' ? null : STEP_SPECS[state.step];
}

/** Fields of the current step that still need an answer, in display order. */
export function missingAnswers(state: WizardState): string[] {
  const step = currentStep(state);
  if (step === null) return [];
  return step.questions
    .map((question) => question.field)
    .filter((field) => !(field in state.answers));
}

/** The question keyboard shortcuts apply to: the first unanswered one. */
export function activeQuestion(state: WizardState) {
  const step = currentStep(state);
  if (step === null) return null;
  const missing = missingAnswers(state);
  return step.questions.find((question) => question.field === missing[0]) ?? null;
}

function assertKnownOption(step: StepSpec, field: string, value: string): void {
  const question = step.questions.find((q) => q.field === field);
  if (question === undefined) {
    throw new WizardError(`field ${field} is not part of step ${step.id}`);
  }
  if (!question.options.some((option) => option.value === value)) {
    throw new WizardError(`value ${value} is not an option for ${field}`);
  }
}

export function answer(state: WizardState, field: string, value: string): WizardState {
  const step = currentStep(state);
  if (step === null) throw new WizardError('task already complete');
  assertKnownOption(step, field, value);
  const answers = { ...state.answers, [field]: value };

  let next: StepId = state.step;
  switch (state.step) {
    case 'language':
      next = value === 'non-indonesia' ? 'complete' : 'topic';
      break;
    case 'topic':
      next = value === 'out-of-topic' ? 'complete' : 'claim-flags';
      break;
    case 'claim-flags': {
      const open = CLAIM_STEP.questions.some((q) => !(q.field in answers));
      next = open ? 'claim-flags' : 'complete';
      break;
    }
    case 'truth':
      next = 'complete';
      break;
  }
  return { task: state.task, step: next, answers };
}

export function isComplete(state: WizardState): boolean {
  return state.step === 'complete';
}

/**
 * The record to POST. Refuses to build anything before the flow finished,
 * which is exactly the client-side block for half-answered claim steps.
 */
export function buildSubmission(state: WizardState, annotatorId: string): Submission {
  if (!isComplete(state)) {
    throw new WizardError(
      `cannot submit: step ${state.step} still needs ${missingAnswers(state).join(', ')}`,
    );
  }
  const tweetId = state.task.tweet.id;
  if (state.task.phase === 'truth') {
    return {
      phase: 'truth',
      tweet_id: tweetId,
      annotator_id: annotatorId,
      truth: state.answers['truth'] as TruthValue,
    };
  }
  if (state.answers['language'] === 'non-indonesia') {
    return {
      phase: 'relevance',
      tweet_id: tweetId,
      annotator_id: annotatorId,
      filter: 'non-indonesia',
    };
  }
  if (state.answers['topic'] === 'out-of-topic') {
    return {
      phase: 'relevance',
      tweet_id: tweetId,
      annotator_id: annotatorId,
      filter: 'out-of-topic',
    };
  }
  return {
    phase: 'relevance',
    tweet_id: tweetId,
    annotator_id: annotatorId,
    filter: 'relevant',
    personal: state.answers['personal'] === 'true',
    humor: state.answers['humor'] === 'true',
    factual_claim: state.answers['factual_claim'] as FactualClaimValue,
  };
}
