/**
 * Canvas renderer for the endorsement graph. Node positions come from the
 * server layout; this module only projects, draws, and hit-tests. The
 * geometry helpers are pure so they can be tested without a canvas.
 */

import { GraphEdge, GraphNode, GraphPayload } from "./schema.js";

export interface Transform {
  scale: number;
  tx: number;
  ty: number;
}

export const SIDE_COLORS: Record<"X" | "Y", string> = {
  X: "#2c7fb8",
  Y: "#d95f0e",
};

/** Fit the unit-square layout into a width x height viewport, centered. */
export function fitTransform(width: number, height: number, margin = 24): Transform {
  const scale = Math.max(1, Math.min(width, height) - 2 * margin);
  return {
    scale,
    tx: (width - scale) / 2,
    ty: (height - scale) / 2,
  };
}

export function toScreen(t: Transform, x: number, y: number): [number, number] {
  return [t.tx + x * t.scale, t.ty + y * t.scale];
}

/** Zoom around a fixed screen point (cursor). */
export function applyZoom(t: Transform, factor: number, cx: number, cy: number): Transform {
  const scale = Math.min(Math.max(t.scale * factor, 10), 1e6);
  const real = scale / t.scale;
  return {
    scale,
    tx: cx - (cx - t.tx) * real,
    ty: cy - (cy - t.ty) * real,
  };
}

export function applyPan(t: Transform, dx: number, dy: number): Transform {
  return { ...t, tx: t.tx + dx, ty: t.ty + dy };
}

export function nodeRadius(node: GraphNode, scale: number): number {
  const base = node.hub ? 7 : 4;
  return base * Math.max(0.6, Math.min(2.0, scale / 600));
}

/** Nearest node within its hit radius (plus slack), or null. */
export function hitTest(
  nodes: readonly GraphNode[],
  t: Transform,
  px: number,
  py: number,
  slack = 3,
): GraphNode | null {
  let best: GraphNode | null = null;
  let bestDist = Infinity;
  for (const node of nodes) {
    const [sx, sy] = toScreen(t, node.x, node.y);
    const dist = Math.hypot(px - sx, py - sy);
    if (dist <= nodeRadius(node, t.scale) + slack && dist < bestDist) {
      best = node;
      bestDist = dist;
    }
  }
  return best;
}

/** The clicked node plus everything connected to it by an edge. */
export function neighborhood(edges: readonly GraphEdge[], user: string): Set<string> {
  const connected = new Set([user]);
  for (const edge of edges) {
    if (edge.source === user) connected.add(edge.target);
    if (edge.target === user) connected.add(edge.source);
  }
  return connected;
}

export interface GraphViewCallbacks {
  onHover?: (node: GraphNode | null) => void;
  onSelect?: (node: GraphNode) => void;
  onBackground?: () => void;
}

export class GraphView {
  private transform: Transform;
  private payload: GraphPayload | null = null;
  private highlight: Set<string> | null = null;
  private connected: Set<string> | null = null;
  private hovered: string | null = null;
  private selected: string | null = null;
  private dragging = false;
  private dragMoved = false;
  private lastPointer: [number, number] = [0, 0];

  constructor(
    private canvas: HTMLCanvasElement,
    private callbacks: GraphViewCallbacks = {},
  ) {
    this.transform = fitTransform(canvas.width, canvas.height);
    canvas.addEventListener("wheel", (e) => this.onWheel(e), { passive: false });
    canvas.addEventListener("mousedown", (e) => this.onDown(e));
    canvas.addEventListener("mousemove", (e) => this.onMove(e));
    canvas.addEventListener("mouseup", (e) => this.onUp(e));
    canvas.addEventListener("mouseleave", () => this.onLeave());
  }

  setGraph(payload: GraphPayload): void {
    this.payload = payload;
    this._index = null;
    this.highlight = null;
    this.connected = null;
    this.selected = null;
    this.transform = fitTransform(this.canvas.width, this.canvas.height);
    this.draw();
  }

  /** Ring-highlight exactly these users (sharers of a hovered item). */
  setHighlight(users: Set<string> | null): void {
    this.highlight = users;
    this.draw();
  }

  getHighlight(): Set<string> | null {
    return this.highlight;
  }

  setSelected(user: string | null): void {
    this.selected = user;
    this.connected =
      user && this.payload ? neighborhood(this.payload.edges, user) : null;
    this.draw();
  }

  resize(width: number, height: number): void {
    this.canvas.width = width;
    this.canvas.height = height;
    this.transform = fitTransform(width, height);
    this.draw();
  }

  private pointer(e: MouseEvent): [number, number] {
    const rect = this.canvas.getBoundingClientRect();
    return [e.clientX - rect.left, e.clientY - rect.top];
  }

  private onWheel(e: WheelEvent): void {
    e.preventDefault();
    const [px, py] = this.pointer(e);
    const factor = e.deltaY < 0 ? 1.15 : 1 / 1.15;
    this.transform = applyZoom(this.transform, factor, px, py);
    this.draw();
  }

  private onDown(e: MouseEvent): void {
    this.dragging = true;
    this.dragMoved = false;
    this.lastPointer = this.pointer(e);
  }

  private onMove(e: MouseEvent): void {
    const [px, py] = this.pointer(e);
    if (this.dragging) {
      const [lx, ly] = this.lastPointer;
      if (Math.hypot(px - lx, py - ly) > 2) {
        this.dragMoved = true;
        this.transform = applyPan(this.transform, px - lx, py - ly);
        this.lastPointer = [px, py];
        this.draw();
      }
      return;
    }
    const node = this.payload ? hitTest(this.payload.nodes, this.transform, px, py) : null;
    const user = node ? node.user : null;
    if (user !== this.hovered) {
      this.hovered = user;
      this.callbacks.onHover?.(node);
      this.draw();
    }
  }

  private onUp(e: MouseEvent): void {
    const wasDrag = this.dragMoved;
    this.dragging = false;
    this.dragMoved = false;
    if (wasDrag || !this.payload) {
      return;
    }
    const [px, py] = this.pointer(e);
    const node = hitTest(this.payload.nodes, this.transform, px, py);
    if (node) {
      this.callbacks.onSelect?.(node);
    } else {
      this.callbacks.onBackground?.();
    }
  }

  private onLeave(): void {
    this.dragging = false;
    if (this.hovered) {
      this.hovered = null;
      this.callbacks.onHover?.(null);
      this.draw();
    }
  }

  draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx || !this.payload) {
      return;
    }
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    const t = this.transform;
    const dimmed = this.highlight !== null || this.connected !== null;

    ctx.lineWidth = 0.5;
    for (const edge of this.payload.edges) {
      const a = this.index.get(edge.source);
      const b = this.index.get(edge.target);
      if (!a || !b) continue;
      const active =
        this.connected !== null &&
        (edge.source === this.selected || edge.target === this.selected);
      ctx.strokeStyle = active ? "rgba(40,40,40,0.8)" : "rgba(150,150,150,0.25)";
      const [x1, y1] = toScreen(t, a.x, a.y);
      const [x2, y2] = toScreen(t, b.x, b.y);
      ctx.beginPath();
      ctx.moveTo(x1, y1);
      ctx.lineTo(x2, y2);
      ctx.stroke();
    }

    for (const node of this.payload.nodes) {
      const [sx, sy] = toScreen(t, node.x, node.y);
      const r = nodeRadius(node, t.scale);
      const inHighlight = this.highlight?.has(node.user) ?? false;
      const inConnected = this.connected?.has(node.user) ?? false;
      const faded = dimmed && !inHighlight && !inConnected;
      ctx.globalAlpha = faded ? 0.25 : 1.0;
      ctx.fillStyle = SIDE_COLORS[node.side];
      ctx.beginPath();
      ctx.arc(sx, sy, r, 0, 2 * Math.PI);
      ctx.fill();
      if (node.user === this.hovered || node.user === this.selected) {
        ctx.strokeStyle = "#222";
        ctx.lineWidth = 2;
        ctx.stroke();
      }
      if (inHighlight) {
        ctx.strokeStyle = "#111";
        ctx.lineWidth = 2.5;
        ctx.beginPath();
        ctx.arc(sx, sy, r + 3, 0, 2 * Math.PI);
        ctx.stroke();
      }
    }
    ctx.globalAlpha = 1.0;
  }

  private get index(): Map<string, GraphNode> {
    if (!this._index && this.payload) {
      this._index = new Map(this.payload.nodes.map((n) => [n.user, n]));
    }
    return this._index ?? new Map();
  }

  private _index: Map<string, GraphNode> | null = null;
}
