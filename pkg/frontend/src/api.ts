// HTTP client for the session service. Fetch is injectable so tests can
// feed recorded fixtures; no DOM APIs are referenced here.

import type {
  AdvanceResponse,
  MoveResponse,
  PlayInfo,
  SessionEvent,
  SituationView,
  WhatIfResponse,
} from './types.js';
import { annotateRawValues } from './panes/whatif.js';

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const text = await this.requestText(method, path, body);
    return JSON.parse(text) as T;
  }

  private async requestText(method: string, path: string, body?: unknown): Promise<string> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body !== undefined ? { 'Content-Type': 'application/json' } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const text = await response.text();
    if (!response.ok) {
      let detail = text;
      try {
        detail = (JSON.parse(text) as { detail?: string }).detail ?? text;
      } catch {
        // keep raw text
      }
      throw new ApiError(response.status, detail);
    }
    return text;
  }

  createSession(body: Record<string, unknown> = {}): Promise<{ session: string; side: string }> {
    return this.request('POST', '/sessions', body);
  }

  situation(session: string): Promise<SituationView> {
    return this.request('GET', `/sessions/${session}/situation`);
  }

  plays(session: string, tags: string, auth: string): Promise<PlayInfo[]> {
    const query = new URLSearchParams({ tags, auth }).toString();
    return this.request('GET', `/sessions/${session}/plays?${query}`);
  }

  submitMove(
    session: string,
    play: string,
    intensity: string,
    params: Record<string, unknown> = {},
  ): Promise<MoveResponse> {
    return this.request('POST', `/sessions/${session}/moves`, { play, intensity, params });
  }

  advance(session: string, ticks: number): Promise<AdvanceResponse> {
    return this.request('POST', `/sessions/${session}/advance`, { ticks });
  }

  authorize(session: string, actionId: number, level: string): Promise<{ granted: boolean }> {
    return this.request('POST', `/sessions/${session}/authorize`, {
      action_id: actionId,
      level,
    });
  }

  /**
   * Run a what-if query. The parsed tree is annotated with the raw value
   * bytes from the response body so the pane can display them verbatim.
   */
  async whatif(session: string, depth: number, pruneRules: string[]): Promise<WhatIfResponse> {
    const text = await this.requestText('POST', `/sessions/${session}/whatif`, {
      depth,
      prune_rules: pruneRules,
    });
    const parsed = JSON.parse(text) as WhatIfResponse;
    annotateRawValues(text, parsed.tree);
    return parsed;
  }

  /** Backfill: events after `since`, in log order. */
  eventsSince(session: string, since: number): Promise<SessionEvent[]> {
    return this.request('GET', `/sessions/${session}/events?stream=false&since=${since}`);
  }

  eventStreamUrl(session: string, since: number): string {
    return `${this.baseUrl}/sessions/${session}/events?since=${since}`;
  }
}
