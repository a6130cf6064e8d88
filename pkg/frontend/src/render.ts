/** DOM rendering for the wizard. Framework-free; one render per state. */

import { activeQuestion, currentStep, WizardState } from './wizard';
import type { Progress, Task } from './types';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderTweetCard(task: Task): HTMLElement {
  const tweet = task.tweet;
  const card = el('section', 'tweet-card');
  card.appendChild(el('p', 'tweet-text', tweet.text));
  if (tweet.date) card.appendChild(el('p', 'tweet-date', `posted ${tweet.date}`));
  const link = el('a', 'tweet-link', 'open tweet (anonymized)');
  link.href = tweet.tweet_url;
  link.target = '_blank';
  link.rel = 'noopener';
  card.appendChild(link);
  if (tweet.urls.length > 0) {
    const list = el('ul', 'tweet-urls');
    for (const url of tweet.urls) {
      const item = el('li', 'tweet-url');
      const anchor = el('a', '', url);
      anchor.href = url;
      anchor.target = '_blank';
      anchor.rel = 'noopener';
      item.appendChild(anchor);
      list.appendChild(item);
    }
    card.appendChild(list);
  }
  return card;
}

export interface RenderCallbacks {
  onAnswer: (field: string, value: string) => void;
  onRetry?: () => void;
}

/** Render the current step: tweet context plus only the active question(s). */
export function renderTask(
  root: HTMLElement,
  state: WizardState,
  callbacks: RenderCallbacks,
): void {
  root.replaceChildren();
  root.appendChild(renderTweetCard(state.task));

  const step = currentStep(state);
  if (step === null) return;
  const active = activeQuestion(state);

  const panel = el('section', 'step-panel');
  panel.appendChild(el('h2', 'step-title', step.title));
  panel.appendChild(el('p', 'step-instructions', step.instructions));

  for (const question of step.questions) {
    const answered = state.answers[question.field];
    const block = el('div', question === active ? 'question active' : 'question');
    block.appendChild(el('p', 'prompt', question.prompt));
    question.options.forEach((option, index) => {
      const button = el(
        'button',
        answered === option.value ? 'option selected' : 'option',
        `${index + 1}. ${option.label}`,
      );
      button.disabled = answered !== undefined || question !== active;
      button.addEventListener('click', () => callbacks.onAnswer(question.field, option.value));
      block.appendChild(button);
    });
    panel.appendChild(block);
  }
  root.appendChild(panel);
}

export function renderCompletion(root: HTMLElement, annotator: string, progress: Progress): void {
  root.replaceChildren();
  const panel = el('section', 'completion');
  panel.appendChild(el('h2', 'step-title', 'All done'));
  panel.appendChild(
    el(
      'p',
      'completion-stats',
      `No ${progress.phase} tasks left. You annotated ` +
        `${progress.per_annotator[annotator] ?? 0} of ${progress.total} tweets; ` +
        `${progress.fully_annotated} are fully annotated.`,
    ),
  );
  root.appendChild(panel);
}

export function renderError(root: HTMLElement, message: string, onRetry: () => void): void {
  root.replaceChildren();
  const panel = el('section', 'error');
  panel.appendChild(el('p', 'error-message', message));
  const retry = el('button', 'retry', 'Retry');
  retry.addEventListener('click', onRetry);
  panel.appendChild(retry);
  root.appendChild(panel);
}

export function renderNotice(root: HTMLElement, message: string): void {
  const notice = el('p', 'notice', message);
  root.prepend(notice);
}
