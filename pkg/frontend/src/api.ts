import {
  GraphPayload,
  TopicSummary,
  UserDetail,
  parseGraph,
  parseTopics,
  parseUserDetail,
} from "./schema.js";

export interface DetailOptions {
  weights?: readonly number[]; // five raw slider values
  seed?: number;
}

/** The whole backend surface; swapped for a fake in tests. */
export interface ApiClient {
  topics(): Promise<TopicSummary[]>;
  graph(topicId: string): Promise<GraphPayload>;
  userDetail(topicId: string, userId: string, opts?: DetailOptions): Promise<UserDetail>;
}

/** Canonical query string for a detail request (stable across callers). */
export function detailQuery(opts?: DetailOptions): string {
  const params = new URLSearchParams();
  if (opts?.weights) {
    opts.weights.forEach((w, i) => params.set(`w${i + 1}`, String(w)));
  }
  if (opts?.seed !== undefined) {
    params.set("seed", String(opts.seed));
  }
  const text = params.toString();
  return text ? `?${text}` : "";
}

export class HttpError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
    this.name = "HttpError";
  }
}

export class HttpApiClient implements ApiClient {
  constructor(private baseUrl: string = "") {}

  private async get(path: string): Promise<unknown> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) {
      let code = "error";
      let message = `${response.status} on ${path}`;
      try {
        const body = (await response.json()) as { code?: string; message?: string };
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        // non-JSON error body: keep the defaults
      }
      throw new HttpError(response.status, code, message);
    }
    return response.json();
  }

  async topics(): Promise<TopicSummary[]> {
    return parseTopics(await this.get("/topics"));
  }

  async graph(topicId: string): Promise<GraphPayload> {
    return parseGraph(await this.get(`/topics/${encodeURIComponent(topicId)}/graph`));
  }

  async userDetail(
    topicId: string,
    userId: string,
    opts?: DetailOptions,
  ): Promise<UserDetail> {
    const path =
      `/topics/${encodeURIComponent(topicId)}/users/${encodeURIComponent(userId)}` +
      detailQuery(opts);
    return parseUserDetail(await this.get(path));
  }
}
