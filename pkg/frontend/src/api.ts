/** Thin typed client for the annotation service HTTP JSON API. */

import type { Phase, Progress, Submission, Task } from './types';

export type SubmitOutcome =
  | { kind: 'stored' }
  | { kind: 'duplicate'; detail: string }
  | { kind: 'invalid'; detail: string };

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  /** Next unannotated tweet for the annotator, or null when the pool is done. */
  async nextTask(annotator: string, phase: Phase): Promise<Task | null> {
    const params = new URLSearchParams({ annotator, phase });
    const response = await this.request(`/api/tasks/next?${params}`);
    if (response.status === 204) return null;
    if (!response.ok) throw new ApiError(await errorDetail(response), response.status);
    return (await response.json()) as Task;
  }

  /**
   * Submit one annotation record. Duplicates (409) and validation rejections
   * (422) are expected flows and are returned, not thrown.
   */
  async submit(record: Submission): Promise<SubmitOutcome> {
    const response = await this.request('/api/annotations', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(record),
    });
    if (response.status === 201) return { kind: 'stored' };
    if (response.status === 409) return { kind: 'duplicate', detail: await errorDetail(response) };
    if (response.status === 422) return { kind: 'invalid', detail: await errorDetail(response) };
    throw new ApiError(await errorDetail(response), response.status);
  }

  async progress(phase: Phase): Promise<Progress> {
    const response = await this.request(`/api/progress?phase=${phase}`);
    if (!response.ok) throw new ApiError(await errorDetail(response), response.status);
    return (await response.json()) as Progress;
  }

  async exportCsv(phase: Phase): Promise<string> {
    const response = await this.request(`/api/export?phase=${phase}&format=csv`);
    if (!response.ok) throw new ApiError(await errorDetail(response), response.status);
    return await response.text();
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    try {
      return await this.fetchImpl(`${this.baseUrl}${path}`, init);
    } catch (cause) {
      throw new ApiError(`network failure talking to ${this.baseUrl}: ${cause}`);
    }
  }
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: string };
    return body.detail ?? `HTTP ${response.status}`;
  } catch {
    return `HTTP ${response.status}`;
  }
}
