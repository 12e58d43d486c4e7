import { afterEach, describe, expect, it, vi } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import { CHECK_AT_30, CHECK_PARSE_ERROR, MISSING_SECTION_400, ONTOLOGY } from './fixtures.js';

function stubFetch(status: number, body: unknown): ReturnType<typeof vi.fn> {
  const mock = vi.fn(async () => {
    return new Response(JSON.stringify(body), {
      status,
      headers: { 'Content-Type': 'application/json' },
    });
  });
  vi.stubGlobal('fetch', mock);
  return mock;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('ApiClient', () => {
  it('POSTs card XML with the xml content type', async () => {
    const mock = stubFetch(201, { id: 'pen_terms' });
    const client = new ApiClient('http://svc');
    const created = await client.createCard('<knowledge-card/>');
    expect(created).toEqual({ id: 'pen_terms' });
    const [url, init] = mock.mock.calls[0]! as [string, RequestInit];
    expect(url).toBe('http://svc/cards');
    expect(init.method).toBe('POST');
    expect((init.headers as Record<string, string>)['Content-Type']).toBe('application/xml');
    expect(init.body).toBe('<knowledge-card/>');
  });

  it('turns the 400 envelope into an ApiError with the validation report', async () => {
    stubFetch(400, MISSING_SECTION_400);
    const client = new ApiClient();
    const error = await client.createCard('<x/>').catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    const apiError = error as ApiError;
    expect(apiError.status).toBe(400);
    expect(apiError.code).toBe('VALIDATION_FAILED');
    expect(apiError.violations()).toHaveLength(1);
    expect(apiError.violations()[0]!.path).toBe('lexicon');
  });

  it('exposes the parse offset of a constraint error', async () => {
    stubFetch(400, CHECK_PARSE_ERROR);
    const client = new ApiClient();
    const error = (await client
      .check({ constraint: 'context x inv : (a = b', bindings: {} })
      .catch((e: unknown) => e)) as ApiError;
    expect(error.code).toBe('PARSE_ERROR');
    expect(error.offset()).toBe(22);
  });

  it('parses a check response', async () => {
    stubFetch(200, CHECK_AT_30);
    const client = new ApiClient();
    const report = await client.check({ constraint: 'context c inv : a = a', bindings: { a: 1 } });
    expect(report.holds).toBe(true);
    expect(report.residual).toBe(0);
  });

  it('builds query strings for related and graph', async () => {
    const mock = stubFetch(200, []);
    const client = new ApiClient();
    await client.related('Lead_protection', 'aggregation', true);
    expect(mock.mock.calls[0]![0]).toBe(
      '/cards/Lead_protection/related?relation=aggregation&infer=true',
    );
    await client.graph('Lead_protection', 2).catch(() => undefined);
    expect(mock.mock.calls[1]![0]).toBe('/graph?root=Lead_protection&depth=2');
  });

  it('fetches the ontology listing', async () => {
    stubFetch(200, ONTOLOGY);
    const client = new ApiClient();
    const entries = await client.ontology();
    expect(entries).toHaveLength(4);
    expect(entries.map((e) => e.local)).toContain('semantique_metier');
  });

  it('survives a non-JSON error body', async () => {
    vi.stubGlobal(
      'fetch',
      vi.fn(async () => new Response('boom', { status: 502 })),
    );
    const client = new ApiClient();
    const error = (await client.listCards().catch((e: unknown) => e)) as ApiError;
    expect(error.status).toBe(502);
    expect(error.code).toBe('HTTP_ERROR');
  });
});
