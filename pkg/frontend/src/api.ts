/** Typed client for the delsplit play service.
 *
 * Every game-theoretic fact shown anywhere in the UI (P/N labels,
 * certificates, Grundy values, option colorings) comes out of these
 * endpoints; the client never computes an outcome itself.
 */

export interface SplitJson {
  index: number;
  parts: number[];
}

export interface MoveJson {
  deleted: number[];
  splits: SplitJson[];
}

export interface AnalysisJson {
  outcome: "P" | "N";
  certificate: string | null;
  grundy?: number;
}

export interface ClassifyResponse extends AnalysisJson {
  heaps: number[];
  terminal: boolean;
}

export interface OptionJson {
  move: MoveJson;
  result: number[];
  outcome: "P" | "N";
}

export interface HistoryEntry {
  by: "human" | "engine";
  move: MoveJson;
  result: number[];
}

export type SessionStatus = "in-progress" | "human_won" | "human_lost";

export interface SessionJson {
  id: string;
  ruleset: string;
  initial: number[];
  heaps: number[];
  human_first: boolean;
  status: SessionStatus;
  turn: "human" | "engine" | null;
  history: HistoryEntry[];
  analysis: AnalysisJson;
  terminal: boolean;
}

export interface EngineMoveResponse {
  session: SessionJson;
  engine_expects_loss: boolean;
}

export interface ParamBound {
  min: number;
  max?: number;
}

export interface FamilyJson {
  family: string;
  example: string;
  label: string;
  params: Record<string, ParamBound>;
  heap_count?: number;
  note?: string;
  zeros_allowed?: boolean;
}

/** Error body from the service, preserved verbatim. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly reason?: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await fetch(this.base + path, init);
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const err = payload as { error?: string; message?: string; reason?: string };
      throw new ApiError(
        response.status,
        err.error ?? "unknown-error",
        err.message ?? `${method} ${path} failed with ${response.status}`,
        err.reason,
      );
    }
    return payload as T;
  }

  health(): Promise<{ ok: boolean }> {
    return this.request("GET", "/api/health");
  }

  async rulesets(): Promise<FamilyJson[]> {
    const body = await this.request<{ families: FamilyJson[] }>("GET", "/api/rulesets");
    return body.families;
  }

  classify(ruleset: string, heaps: number[]): Promise<ClassifyResponse> {
    return this.request("POST", "/api/classify", { ruleset, heaps });
  }

  async options(ruleset: string, heaps: number[]): Promise<OptionJson[]> {
    const body = await this.request<{ options: OptionJson[] }>(
      "POST", "/api/options", { ruleset, heaps });
    return body.options;
  }

  async createSession(
    ruleset: string, heaps: number[], humanFirst: boolean,
  ): Promise<SessionJson> {
    const body = await this.request<{ session: SessionJson }>(
      "POST", "/api/session", { ruleset, heaps, human_first: humanFirst });
    return body.session;
  }

  async getSession(id: string): Promise<SessionJson> {
    const body = await this.request<{ session: SessionJson }>(
      "GET", `/api/session/${id}`);
    return body.session;
  }

  async move(id: string, move: MoveJson): Promise<SessionJson> {
    const body = await this.request<{ session: SessionJson }>(
      "POST", `/api/session/${id}/move`, move);
    return body.session;
  }

  engineMove(id: string): Promise<EngineMoveResponse> {
    return this.request("POST", `/api/session/${id}/engine-move`);
  }
}
