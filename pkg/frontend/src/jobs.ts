// Pipeline job submission and monitoring.

import { ApiClient, JobStatus } from "./api.js";

export class JobsPanel {
  private input: HTMLInputElement;
  private mode: HTMLSelectElement;
  private status: HTMLElement;
  private outputs: HTMLElement;

  constructor(private client: ApiClient, private root: HTMLElement) {
    this.root.innerHTML = "";
    this.mode = document.createElement("select");
    for (const value of ["ccdc_code", "doi"]) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value === "ccdc_code" ? "CCDC code" : "DOI";
      this.mode.appendChild(option);
    }
    this.input = document.createElement("input");
    this.input.placeholder = "ABAYUY or 10.xxxx/...";
    const submit = document.createElement("button");
    submit.textContent = "Run pipeline";
    submit.addEventListener("click", () => void this.submit());
    this.status = document.createElement("div");
    this.status.className = "job-status";
    this.outputs = document.createElement("ul");
    this.outputs.className = "job-outputs";
    const row = document.createElement("div");
    row.className = "job-row";
    row.append(this.mode, this.input, submit);
    this.root.append(row, this.status, this.outputs);
  }

  async submit(): Promise<JobStatus | null> {
    const value = this.input.value.trim();
    if (!value) return null;
    this.status.textContent = "submitting…";
    this.outputs.innerHTML = "";
    try {
      const body =
        this.mode.value === "doi" ? { doi: value } : { ccdc_code: value };
      const { job_id } = await this.client.submitJob(body);
      this.status.textContent = `job ${job_id}: running…`;
      const finished = await this.client.waitForJob(job_id);
      this.renderStatus(finished);
      return finished;
    } catch (error) {
      this.status.textContent = `submission failed: ${String(error)}`;
      return null;
    }
  }

  renderStatus(status: JobStatus): void {
    this.status.textContent = `job ${status.job_id}: ${status.status}`;
    this.outputs.innerHTML = "";
    for (const path of status.outputs) {
      const item = document.createElement("li");
      item.textContent = path.split("/").pop() ?? path;
      this.outputs.appendChild(item);
    }
    for (const [node, kind, message] of status.errors) {
      const item = document.createElement("li");
      item.className = "job-error";
      item.textContent = `${node}: ${kind}: ${message}`;
      this.outputs.appendChild(item);
    }
  }
}
