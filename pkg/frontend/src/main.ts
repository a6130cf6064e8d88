/** Browser entry point: wires the session to the DOM and keyboard. */

import { ApiClient } from './api';
import { WizardSession } from './app';
import { attachShortcuts } from './keyboard';
import { renderCompletion, renderError, renderNotice, renderTask } from './render';
import { activeQuestion, WizardState } from './wizard';
import type { Phase } from './types';

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

export function boot(root: HTMLElement): WizardSession {
  const annotator = param('annotator', '');
  const phase = param('phase', 'relevance') as Phase;
  const baseUrl = param('api', '');
  if (!annotator) {
    root.textContent = 'Add ?annotator=<your-id> (and optionally &phase=truth) to the URL.';
    throw new Error('missing annotator id');
  }

  const api = new ApiClient(baseUrl);
  const session = new WizardSession(api, annotator, phase, {
    showTask: (state: WizardState) =>
      renderTask(root, state, {
        onAnswer: (field, value) => void session.select(field, value),
      }),
    showCompletion: (progress) => renderCompletion(root, annotator, progress),
    showConflict: (detail) => renderNotice(root, `already stored: ${detail}`),
    showError: (message) => renderError(root, message, () => void session.loadNext()),
  });

  attachShortcuts(
    window,
    () => {
      const question = session.state ? activeQuestion(session.state) : null;
      return question ? question.options.length : 0;
    },
    (index) => {
      const question = session.state ? activeQuestion(session.state) : null;
      if (question) void session.select(question.field, question.options[index].value);
    },
  );

  void session.loadNext();
  return session;
}

if (typeof document !== 'undefined') {
  const root = document.getElementById('wizard');
  if (root !== null) boot(root);
}
