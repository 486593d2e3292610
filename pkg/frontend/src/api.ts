/** Typed client for the sweep service. All calls go through an injectable
 * fetch so tests can run against a mocked transport. */
import type {
  DatasetSummaryJson,
  ParetoSetJson,
  ProgressJson,
  RecordJson,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly violations: string[];

  constructor(status: number, message: string, violations: string[] = []) {
    super(message);
    this.status = status;
    this.violations = violations;
  }
}

export class NetworkError extends Error {
  constructor(cause: unknown) {
    super("service unreachable");
    this.cause = cause;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function toApiError(res: Response): Promise<ApiError> {
  let message = `request failed with status ${res.status}`;
  let violations: string[] = [];
  try {
    const body = await res.json();
    if (Array.isArray(body.violations)) {
      violations = body.violations.map(String);
      message = violations.join("; ");
    } else if (typeof body.error === "string") {
      message = body.error;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  return new ApiError(res.status, message, violations);
}

export interface FrontierQuery {
  metric: string;
  grouping?: "per_family" | "all_families";
  mode?: "weak" | "strict";
}

export class ServiceClient {
  readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request(url: string, init?: RequestInit): Promise<Response> {
    let res: Response;
    try {
      res = await this.fetchImpl(this.baseUrl + url, init);
    } catch (e) {
      throw new NetworkError(e);
    }
    if (!res.ok) throw await toApiError(res);
    return res;
  }

  async uploadDataset(
    file: Blob,
    filename: string,
    dataConfig: object,
  ): Promise<DatasetSummaryJson> {
    const form = new FormData();
    form.append("file", file, filename);
    form.append("config", JSON.stringify(dataConfig));
    const res = await this.request("/datasets", { method: "POST", body: form });
    return res.json();
  }

  async createExploration(body: object): Promise<{ id: string }> {
    const res = await this.request("/explorations", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return res.json();
  }

  async getProgress(jobId: string): Promise<ProgressJson> {
    const res = await this.request(`/explorations/${jobId}/progress`);
    return res.json();
  }

  async getRecords(jobId: string): Promise<{ records: RecordJson[] }> {
    const res = await this.request(`/explorations/${jobId}/records`);
    return res.json();
  }

  /** per_family grouping answers with an array, all_families with one set. */
  async getFrontier(
    jobId: string,
    query: FrontierQuery,
  ): Promise<ParetoSetJson[] | ParetoSetJson> {
    const params = new URLSearchParams({ metric: query.metric });
    if (query.grouping) params.set("grouping", query.grouping);
    if (query.mode) params.set("mode", query.mode);
    const res = await this.request(
      `/explorations/${jobId}/frontier?${params.toString()}`,
    );
    return res.json();
  }

  reportUrl(jobId: string): string {
    return `${this.baseUrl}/explorations/${jobId}/report`;
  }

  exportCsvUrl(jobId: string, metric: string, family?: string): string {
    const params = new URLSearchParams({ metric });
    if (family) params.set("family", family);
    return `${this.baseUrl}/explorations/${jobId}/export/csv?${params.toString()}`;
  }
}
