// Typed client for the mofminer HTTP API. Every number the console
// displays originates from one of these responses.

export interface AskResponse {
  answer_text: string;
  structured_result: StructuredResult | null;
  parsed_query: Record<string, unknown> | null;
}

export interface StructuredResult {
  kind: string;
  rows: Array<Record<string, string | number>>;
  properties: string[];
  value: number | null;
  operation: string | null;
  witnesses: string[];
  count: number;
  total: number | null;
  offset: number | null;
  page_size: number | null;
  message: string | null;
}

export interface JobCreated {
  job_id: string;
}

export interface JobStatus {
  job_id: string;
  status: "queued" | "running" | "done" | "failed";
  doc_id: string | null;
  outputs: string[];
  errors: string[][];
}

export interface VizAtom {
  element: string;
  x: number;
  y: number;
  z: number;
}

export interface VizPayload {
  cell: {
    a: number;
    b: number;
    c: number;
    alpha: number;
    beta: number;
    gamma: number;
    space_group: string;
    vectors: number[][];
  };
  atoms: VizAtom[];
  bonds: number[][];
  ccdc_code?: string;
}

export interface HealthResponse {
  status: string;
  dataset_records: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json", Accept: "application/json" },
      ...init,
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthResponse> {
    return this.request("/health");
  }

  ask(sessionId: string, question: string): Promise<AskResponse> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/ask`, {
      method: "POST",
      body: JSON.stringify({ question }),
    });
  }

  submitJob(body: { doi?: string; ccdc_code?: string; raw_text?: string }): Promise<JobCreated> {
    return this.request("/jobs", { method: "POST", body: JSON.stringify(body) });
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.request(`/jobs/${encodeURIComponent(jobId)}`);
  }

  async waitForJob(jobId: string, pollMs = 250, timeoutMs = 60_000): Promise<JobStatus> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const status = await this.jobStatus(jobId);
      if (status.status === "done" || status.status === "failed") return status;
      if (Date.now() > deadline) throw new Error(`job ${jobId} timed out`);
      await new Promise((resolve) => setTimeout(resolve, pollMs));
    }
  }

  cifViz(ccdcCode: string): Promise<VizPayload> {
    return this.request(`/cif/${encodeURIComponent(ccdcCode)}/viz`);
  }

  async cifText(ccdcCode: string): Promise<string> {
    const response = await fetch(`${this.baseUrl}/cif/${encodeURIComponent(ccdcCode)}`);
    if (!response.ok) throw new ApiError(response.status, await response.text());
    return response.text();
  }
}
