/** Typed client for the knowcard service. All reads render server data
 * verbatim; the client never re-derives what the server already computed. */

import type {
  CardJson,
  CardListItem,
  CheckRequest,
  CheckResponse,
  ErrorEnvelope,
  GraphResponse,
  OntologyProperty,
  RelatedItem,
  Violation,
} from './types.js';

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: unknown;

  constructor(status: number, code: string, message: string, detail?: unknown) {
    super(message);
    this.status = status;
    this.code = code;
    this.detail = detail;
  }

  /** Validation report carried by a 400 VALIDATION_FAILED response. */
  violations(): Violation[] {
    if (Array.isArray(this.detail)) {
      return this.detail as Violation[];
    }
    return [];
  }

  /** Character offset carried by a parse-stage 400. */
  offset(): number | null {
    if (
      typeof this.detail === 'object' &&
      this.detail !== null &&
      'offset' in this.detail &&
      typeof (this.detail as { offset: unknown }).offset === 'number'
    ) {
      return (this.detail as { offset: number }).offset;
    }
    return null;
  }
}

async function raiseFor(response: Response): Promise<never> {
  let code = 'HTTP_ERROR';
  let message = `HTTP ${response.status}`;
  let detail: unknown;
  try {
    const body = (await response.json()) as ErrorEnvelope;
    code = body.error.code;
    message = body.error.message;
    detail = body.error.detail;
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(response.status, code, message, detail);
}

export class ApiClient {
  constructor(readonly baseUrl: string = '') {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      await raiseFor(response);
    }
    return (await response.json()) as T;
  }

  async createCard(xml: string): Promise<{ id: string }> {
    return this.json('/cards', {
      method: 'POST',
      headers: { 'Content-Type': 'application/xml' },
      body: xml,
    });
  }

  async listCards(): Promise<CardListItem[]> {
    return this.json('/cards');
  }

  async getCardJson(id: string): Promise<CardJson> {
    return this.json(`/cards/${encodeURIComponent(id)}?profile=json`);
  }

  async getCardXml(id: string): Promise<string> {
    const response = await fetch(
      `${this.baseUrl}/cards/${encodeURIComponent(id)}?profile=raw-xml`,
    );
    if (!response.ok) {
      await raiseFor(response);
    }
    return response.text();
  }

  async deleteCard(id: string): Promise<void> {
    const response = await fetch(`${this.baseUrl}/cards/${encodeURIComponent(id)}`, {
      method: 'DELETE',
    });
    if (!response.ok) {
      await raiseFor(response);
    }
  }

  async related(id: string, relation: string, infer: boolean): Promise<RelatedItem[]> {
    const params = new URLSearchParams({ relation, infer: String(infer) });
    return this.json(`/cards/${encodeURIComponent(id)}/related?${params}`);
  }

  async graph(root: string, depth: number): Promise<GraphResponse> {
    const params = new URLSearchParams({ root, depth: String(depth) });
    return this.json(`/graph?${params}`);
  }

  async check(request: CheckRequest): Promise<CheckResponse> {
    return this.json('/check', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(request),
    });
  }

  async ontology(): Promise<OntologyProperty[]> {
    return this.json('/ontology');
  }
}
