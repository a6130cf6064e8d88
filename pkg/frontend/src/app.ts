/**
 * Wizard session orchestration: fetch a task, collect answers step by step,
 * submit, advance to the next task. Pure of DOM concerns so the flow is
 * testable headlessly; render callbacks plug the UI in.
 */

import { ApiClient, ApiError } from './api';
import { answer, buildSubmission, isComplete, startWizard, WizardState } from './wizard';
import type { Phase, Progress, Task } from './types';

export interface SessionView {
  showTask(state: WizardState): void;
  showCompletion(progress: Progress): void;
  showConflict(detail: string): void;
  showError(message: string): void;
}

export type SessionStatus = 'working' | 'done' | 'error';

export class WizardSession {
  state: WizardState | null = null;
  status: SessionStatus = 'working';

  constructor(
    private readonly api: ApiClient,
    readonly annotator: string,
    readonly phase: Phase,
    private readonly view: SessionView,
  ) {}

  /** Fetch and show the next task; completion screen when the pool is done. */
  async loadNext(): Promise<void> {
    try {
      const task: Task | null = await this.api.nextTask(this.annotator, this.phase);
      if (task === null) {
        this.status = 'done';
        this.view.showCompletion(await this.api.progress(this.phase));
        return;
      }
      this.state = startWizard(task);
      this.status = 'working';
      this.view.showTask(this.state);
    } catch (cause) {
      this.fail(cause);
    }
  }

  /** Record one answer; auto-submits and advances when the flow completes. */
  async select(field: string, value: string): Promise<void> {
    if (this.state === null) return;
    this.state = answer(this.state, field, value);
    if (!isComplete(this.state)) {
      this.view.showTask(this.state);
      return;
    }
    await this.submitCurrent();
  }

  private async submitCurrent(): Promise<void> {
    if (this.state === null) return;
    try {
      const outcome = await this.api.submit(buildSubmission(this.state, this.annotator));
      switch (outcome.kind) {
        case 'stored':
          await this.loadNext();
          return;
        case 'duplicate':
          // e.g. a resubmission after a page reload: inform, then move on
          this.view.showConflict(outcome.detail);
          await this.loadNext();
          return;
        case 'invalid':
          this.view.showError(`the server rejected the record: ${outcome.detail}`);
          this.status = 'error';
          return;
      }
    } catch (cause) {
      this.fail(cause);
    }
  }

  private fail(cause: unknown): void {
    this.status = 'error';
    const message = cause instanceof ApiError ? cause.message : `unexpected error: ${cause}`;
    this.view.showError(message);
  }
}
