// Canvas ball-and-stick viewer with orbit and zoom. Scene geometry is
// built in scene.ts from the service payload; this file only paints
// and handles input.

import { ApiClient, ApiError } from "./api.js";
import { OrbitState, ViewerScene, buildScene, project, scaleFor } from "./scene.js";

export class StructureViewer {
  scene: ViewerScene | null = null;
  camera: OrbitState = { yaw: 0.6, pitch: -0.35, zoom: 1.0 };
  showCell = true;

  private canvas: HTMLCanvasElement;
  private badge: HTMLElement;
  private banner: HTMLElement;
  private codeInput: HTMLInputElement;
  private dragging = false;
  private lastX = 0;
  private lastY = 0;

  constructor(private client: ApiClient, private root: HTMLElement) {
    this.root.innerHTML = "";
    const controls = document.createElement("div");
    controls.className = "viewer-controls";
    this.codeInput = document.createElement("input");
    this.codeInput.placeholder = "CCDC code";
    const loadButton = document.createElement("button");
    loadButton.textContent = "Load";
    loadButton.addEventListener("click", () => void this.loadStructure(this.codeInput.value));
    const cellToggle = document.createElement("label");
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.checked = this.showCell;
    checkbox.addEventListener("change", () => {
      this.showCell = checkbox.checked;
      this.draw();
    });
    cellToggle.append(checkbox, document.createTextNode(" unit cell"));
    this.badge = document.createElement("span");
    this.badge.className = "atom-badge";
    controls.append(this.codeInput, loadButton, cellToggle, this.badge);

    this.banner = document.createElement("div");
    this.banner.className = "viewer-banner";

    this.canvas = document.createElement("canvas");
    this.canvas.width = 640;
    this.canvas.height = 480;
    this.canvas.className = "viewer-canvas";
    this.canvas.addEventListener("mousedown", (e) => {
      this.dragging = true;
      this.lastX = e.clientX;
      this.lastY = e.clientY;
    });
    window.addEventListener("mouseup", () => (this.dragging = false));
    this.canvas.addEventListener("mousemove", (e) => {
      if (!this.dragging) return;
      this.orbit((e.clientX - this.lastX) * 0.01, (e.clientY - this.lastY) * 0.01);
      this.lastX = e.clientX;
      this.lastY = e.clientY;
    });
    this.canvas.addEventListener("wheel", (e) => {
      e.preventDefault();
      this.zoomBy(Math.exp(-e.deltaY * 0.001));
    });

    this.root.append(controls, this.banner, this.canvas);
  }

  orbit(deltaYaw: number, deltaPitch: number): void {
    this.camera.yaw += deltaYaw;
    this.camera.pitch = Math.max(-1.5, Math.min(1.5, this.camera.pitch + deltaPitch));
    this.draw();
  }

  zoomBy(factor: number): void {
    this.camera.zoom = Math.max(0.1, Math.min(20, this.camera.zoom * factor));
    this.draw();
  }

  async loadStructure(ccdcCode: string): Promise<void> {
    this.banner.textContent = "";
    try {
      const payload = await this.client.cifViz(ccdcCode.trim());
      this.scene = buildScene(payload);
      this.badge.textContent = `${this.scene.atoms.length} atoms`;
      this.draw();
    } catch (error) {
      this.scene = null;
      this.badge.textContent = "";
      this.banner.textContent =
        error instanceof ApiError && error.status === 404
          ? `structure unavailable: ${ccdcCode.trim()}`
          : `failed to load: ${String(error)}`;
      this.draw();
    }
  }

  draw(): void {
    let ctx: CanvasRenderingContext2D | null;
    try {
      ctx = this.canvas.getContext("2d");
    } catch {
      return; // no 2D context in this environment (e.g. jsdom)
    }
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    const scene = this.scene;
    if (!scene) return;

    if (this.showCell) {
      ctx.strokeStyle = "#8899aa";
      ctx.lineWidth = 1;
      for (const [start, end] of scene.cellEdges) {
        const a = project(start, scene, this.camera, width, height);
        const b = project(end, scene, this.camera, width, height);
        ctx.beginPath();
        ctx.moveTo(a.x, a.y);
        ctx.lineTo(b.x, b.y);
        ctx.stroke();
      }
    }

    const projected = scene.atoms.map((atom) =>
      project(atom.position, scene, this.camera, width, height),
    );
    ctx.strokeStyle = "#555";
    ctx.lineWidth = 2;
    for (const [i, j] of scene.bonds) {
      ctx.beginPath();
      ctx.moveTo(projected[i].x, projected[i].y);
      ctx.lineTo(projected[j].x, projected[j].y);
      ctx.stroke();
    }

    const scale = scaleFor(scene, this.camera, width, height);
    const order = projected
      .map((p, index) => ({ index, depth: p.depth }))
      .sort((a, b) => a.depth - b.depth);
    for (const { index } of order) {
      const atom = scene.atoms[index];
      const p = projected[index];
      ctx.beginPath();
      ctx.fillStyle = atom.color;
      ctx.arc(p.x, p.y, Math.max(2, atom.radius * scale), 0, Math.PI * 2);
      ctx.fill();
      ctx.strokeStyle = "#222";
      ctx.lineWidth = 0.5;
      ctx.stroke();
    }
  }
}
