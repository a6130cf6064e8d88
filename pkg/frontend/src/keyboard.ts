/** Number-key shortcuts: 1..9 pick the nth option of the active question. */

export function digitToOptionIndex(key: string, optionCount: number): number | null {
  if (!/^[1-9]$/.test(key)) return null;
  const index = Number(key) - 1;
  return index < optionCount ? index : null;
}

export type ShortcutHandler = (optionIndex: number) => void;

/**
 * Wire keydown digits to the handler. The option count is looked up lazily so
 * the same listener follows the wizard from step to step. Returns a detach
 * function.
 */
export function attachShortcuts(
  target: Pick<EventTarget, 'addEventListener' | 'removeEventListener'>,
  optionCount: () => number,
  handler: ShortcutHandler,
): () => void {
  const listener = (event: Event) => {
    const key = (event as KeyboardEvent).key;
    const index = digitToOptionIndex(key, optionCount());
    if (index !== null) {
      event.preventDefault();
      handler(index);
    }
  };
  target.addEventListener('keydown', listener);
  return () => target.removeEventListener('keydown', listener);
}
