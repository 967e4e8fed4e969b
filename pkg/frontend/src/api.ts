// HTTP client for the balance-kit service. One in-flight request per
// endpoint: issuing a new one aborts its predecessor.

import {
  ApiDocument,
  ApiErrorBody,
  MaxvelData,
  OptionOverrides,
  RegionData,
  StanceDocument,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public body: ApiErrorBody) {
    super(`${body.code} (${body.stage}): ${body.message}`);
  }
}

export interface ApiClient {
  region(doc: StanceDocument, opts?: OptionOverrides): Promise<ApiDocument<RegionData>>;
  maxvel(doc: StanceDocument, opts?: OptionOverrides): Promise<ApiDocument<MaxvelData>>;
  health(): Promise<{ status: string; version: string }>;
}

type FetchLike = typeof fetch;

export function createClient(baseUrl: string, fetchImpl: FetchLike = fetch): ApiClient {
  const controllers = new Map<string, AbortController>();

  async function post<T>(endpoint: string, doc: StanceDocument, opts?: OptionOverrides): Promise<ApiDocument<T>> {
    controllers.get(endpoint)?.abort();
    const controller = new AbortController();
    controllers.set(endpoint, controller);
    const body: Record<string, unknown> = { ...doc };
    if (opts && Object.keys(opts).length > 0) {
      body.options = opts;
    }
    const res = await fetchImpl(`${baseUrl}${endpoint}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal: controller.signal,
    });
    const text = await res.text();
    if (!res.ok) {
      let parsed: ApiErrorBody;
      try {
        parsed = JSON.parse(text) as ApiErrorBody;
      } catch {
        parsed = { code: "http_error", stage: "transport", message: text || res.statusText };
      }
      throw new ApiError(res.status, parsed);
    }
    return JSON.parse(text) as ApiDocument<T>;
  }

  return {
    region: (doc, opts) => post<RegionData>("/api/region", doc, opts),
    maxvel: (doc, opts) => post<MaxvelData>("/api/maxvel", doc, opts),
    health: async () => {
      const res = await fetchImpl(`${baseUrl}/api/health`);
      if (!res.ok) throw new Error(`health check failed: ${res.status}`);
      return (await res.json()) as { status: string; version: string };
    },
  };
}
