import { describe, expect, it, vi } from 'vitest';

import { attachShortcuts, digitToOptionIndex } from '../src/keyboard';

describe('digitToOptionIndex', () => {
  it('maps 1-based digits to 0-based option indices', () => {
    expect(digitToOptionIndex('1', 4)).toBe(0);
    expect(digitToOptionIndex('4', 4)).toBe(3);
  });

  it('ignores digits beyond the option count', () => {
    expect(digitToOptionIndex('3', 2)).toBeNull();
  });

  it('ignores non-digits', () => {
    for (const key of ['0', 'a', 'Enter', ' ', '12']) {
      expect(digitToOptionIndex(key, 4)).toBeNull();
    }
  });
});

class FakeTarget {
  listeners = new Set<(event: Event) => void>();

  addEventListener(_type: string, listener: (event: Event) => void) {
    this.listeners.add(listener);
  }

  removeEventListener(_type: string, listener: (event: Event) => void) {
    this.listeners.delete(listener);
  }

  press(key: string) {
    const event = { key, preventDefault: vi.fn() } as unknown as Event;
    for (const listener of this.listeners) listener(event);
    return event as unknown as { preventDefault: ReturnType<typeof vi.fn> };
  }
}

describe('attachShortcuts', () => {
  it('routes digits to the handler and can detach', () => {
    const target = new FakeTarget();
    const picks: number[] = [];
    const detach = attachShortcuts(target, () => 3, (index) => picks.push(index));

    target.press('2');
    target.press('9'); // beyond option count: ignored
    target.press('x');
    expect(picks).toEqual([1]);

    detach();
    target.press('1');
    expect(picks).toEqual([1]);
  });

  it('tracks the option count lazily', () => {
    const target = new FakeTarget();
    let count = 2;
    const picks: number[] = [];
    attachShortcuts(target, () => count, (index) => picks.push(index));

    target.press('3'); // only 2 options now
    count = 4;
    target.press('3');
    expect(picks).toEqual([2]);
  });
});
