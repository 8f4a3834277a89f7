import type {
  AstPayload,
  HealthStatus,
  PageModel,
  PartEntry,
  SuggestionRow,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit
) => Promise<Response>;

/** Error reported by the service, carrying its machine-readable code. */
export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly code: string
  ) {
    super(`service returned ${status} (${code})`);
    this.name = "ApiRequestError";
  }
}

/**
 * Thin client for the formula service.
 *
 * The fetch implementation is injectable so tests can simulate network
 * failures without a server in the loop.
 */
export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    // late-bound so a global fetch installed after construction still wins
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  async fetchPage(qid: string, lang?: string): Promise<PageModel> {
    const query = lang ? `?${new URLSearchParams({ lang })}` : "";
    return (await this.getJson(
      `/v1/page/${encodeURIComponent(qid)}${query}`
    )) as PageModel;
  }

  async fetchAst(tex: string): Promise<AstPayload> {
    const query = new URLSearchParams({ tex, format: "ast" });
    return (await this.getJson(`/v1/render?${query}`)) as AstPayload;
  }

  async fetchSuggestions(
    tex: string,
    options?: { limit?: number; lang?: string }
  ): Promise<SuggestionRow[]> {
    const query = new URLSearchParams({ tex });
    if (options?.limit !== undefined) {
      query.set("limit", String(options.limit));
    }
    if (options?.lang !== undefined) {
      query.set("lang", options.lang);
    }
    return (await this.getJson(`/v1/suggest?${query}`)) as SuggestionRow[];
  }

  async commitPart(
    qid: string,
    fragment: string,
    partQid: string
  ): Promise<PartEntry[]> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/v1/items/${encodeURIComponent(qid)}/parts`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ fragment, part_qid: partQid }),
      }
    );
    return (await this.decode(response)) as PartEntry[];
  }

  async health(): Promise<HealthStatus> {
    return (await this.getJson("/v1/health")) as HealthStatus;
  }

  private async getJson(path: string): Promise<unknown> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`);
    return this.decode(response);
  }

  private async decode(response: Response): Promise<unknown> {
    if (response.ok) {
      return response.json();
    }
    let code = "unknown_error";
    try {
      const body = (await response.json()) as { error?: unknown };
      if (typeof body.error === "string") {
        code = body.error;
      }
    } catch {
      // non-JSON error body, keep the fallback code
    }
    throw new ApiRequestError(response.status, code);
  }
}
