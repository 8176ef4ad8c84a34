import type { AuthorProfile, CommunityReport, NetworkPayload, SearchRow } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Base URL for the citetree service; set `window.CITETREE_API_BASE`
 * before loading the app when the UI is served from somewhere else. */
export function apiBaseUrl(): string {
  const configured = (globalThis as Record<string, unknown>)["CITETREE_API_BASE"];
  return typeof configured === "string" ? configured.replace(/\/$/, "") : "";
}

export class ApiClient {
  constructor(private readonly baseUrl: string = apiBaseUrl()) {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) {
      let detail = `request failed with status ${response.status}`;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body && typeof body.detail === "string") {
          detail = body.detail;
        }
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  searchAuthors(query: string, limit = 20): Promise<SearchRow[]> {
    const params = new URLSearchParams({ name: query, limit: String(limit) });
    return this.get(`/authors?${params}`);
  }

  profile(authorId: number): Promise<AuthorProfile> {
    return this.get(`/authors/${authorId}`);
  }

  network(authorId: number): Promise<NetworkPayload> {
    return this.get(`/authors/${authorId}/network`);
  }

  community(authorId: number): Promise<CommunityReport> {
    return this.get(`/authors/${authorId}/community`);
  }
}
