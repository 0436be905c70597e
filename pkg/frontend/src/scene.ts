// Pure scene math for the ball-and-stick viewer: everything here is a
// deterministic function of the /cif/{code}/viz payload plus a camera
// state, so it can be unit-tested without a canvas.

import type { VizPayload } from "./api.js";

export type Vec3 = [number, number, number];

export interface SceneAtom {
  element: string;
  position: Vec3;
  color: string;
  radius: number;
}

export interface ViewerScene {
  atoms: SceneAtom[];
  bonds: Array<[number, number]>;
  cellEdges: Array<[Vec3, Vec3]>;
  center: Vec3;
  extent: number;
}

export interface OrbitState {
  yaw: number;
  pitch: number;
  zoom: number;
}

const ELEMENT_COLORS: Record<string, string> = {
  H: "#e8e8e8",
  C: "#4a4a4a",
  N: "#3050f8",
  O: "#ff0d0d",
  S: "#ffd32e",
  P: "#ff8000",
  F: "#90e050",
  Cl: "#1ff01f",
  Br: "#a62929",
  I: "#940094",
  Cu: "#c88033",
  Zn: "#7d80b0",
  Cd: "#ffd98f",
  Co: "#f090a0",
  Ni: "#50d050",
  Fe: "#e06633",
  Mn: "#9c7ac7",
  Zr: "#94e0e0",
  Al: "#bfa6a6",
  Mg: "#8aff00",
};

const DISPLAY_RADII: Record<string, number> = {
  H: 0.32,
  C: 0.55,
  N: 0.52,
  O: 0.5,
  S: 0.72,
};

export function elementColor(element: string): string {
  return ELEMENT_COLORS[element] ?? "#b070d0";
}

function displayRadius(element: string): number {
  return DISPLAY_RADII[element] ?? 0.75;
}

function add(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

export function cellEdges(vectors: number[][]): Array<[Vec3, Vec3]> {
  // The eight corners of the parallelepiped are sums of subsets of the
  // three lattice vectors; an edge joins corners differing in one bit.
  const corners: Vec3[] = [];
  for (let bits = 0; bits < 8; bits++) {
    let corner: Vec3 = [0, 0, 0];
    for (let k = 0; k < 3; k++) {
      if (bits & (1 << k)) corner = add(corner, vectors[k] as Vec3);
    }
    corners.push(corner);
  }
  const edges: Array<[Vec3, Vec3]> = [];
  for (let i = 0; i < 8; i++) {
    for (let k = 0; k < 3; k++) {
      const j = i | (1 << k);
      if (j !== i) edges.push([corners[i], corners[j]]);
    }
  }
  return edges;
}

export function buildScene(payload: VizPayload): ViewerScene {
  const atoms: SceneAtom[] = payload.atoms.map((atom) => ({
    element: atom.element,
    position: [atom.x, atom.y, atom.z],
    color: elementColor(atom.element),
    radius: displayRadius(atom.element),
  }));
  const edges = cellEdges(payload.cell.vectors);

  const points: Vec3[] = atoms.map((a) => a.position);
  for (const [start, end] of edges) points.push(start, end);
  const center: Vec3 = [0, 0, 0];
  for (const p of points) {
    center[0] += p[0] / points.length;
    center[1] += p[1] / points.length;
    center[2] += p[2] / points.length;
  }
  let extent = 1;
  for (const p of points) {
    const d = Math.hypot(p[0] - center[0], p[1] - center[1], p[2] - center[2]);
    extent = Math.max(extent, d);
  }
  return {
    atoms,
    bonds: payload.bonds.map(([i, j]) => [i, j] as [number, number]),
    cellEdges: edges,
    center,
    extent,
  };
}

export interface Projected {
  x: number;
  y: number;
  depth: number;
}

export function project(
  point: Vec3,
  scene: Pick<ViewerScene, "center" | "extent">,
  camera: OrbitState,
  width: number,
  height: number,
): Projected {
  const [cx, cy, cz] = scene.center;
  let x = point[0] - cx;
  let y = point[1] - cy;
  let z = point[2] - cz;
  // yaw about the vertical axis, then pitch about the horizontal axis
  const cosY = Math.cos(camera.yaw);
  const sinY = Math.sin(camera.yaw);
  [x, z] = [x * cosY + z * sinY, -x * sinY + z * cosY];
  const cosP = Math.cos(camera.pitch);
  const sinP = Math.sin(camera.pitch);
  [y, z] = [y * cosP - z * sinP, y * sinP + z * cosP];

  const scale = (camera.zoom * Math.min(width, height)) / (2.4 * scene.extent);
  return {
    x: width / 2 + x * scale,
    y: height / 2 - y * scale,
    depth: z,
  };
}

export function scaleFor(scene: Pick<ViewerScene, "extent">, camera: OrbitState, width: number, height: number): number {
  return (camera.zoom * Math.min(width, height)) / (2.4 * scene.extent);
}
