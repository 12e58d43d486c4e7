/** Deterministic node-link layout: columns by BFS depth (as reported by
 * the server), rows alphabetical within a column. No physics, so a given
 * graph always renders identically. */

import type { GraphEdge, GraphNode, GraphResponse } from './types.js';

export interface PlacedNode extends GraphNode {
  x: number;
  y: number;
}

export interface PlacedEdge extends GraphEdge {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface Layout {
  nodes: PlacedNode[];
  edges: PlacedEdge[];
  width: number;
  height: number;
}

export interface LayoutOptions {
  columnGap?: number;
  rowGap?: number;
  margin?: number;
}

export function layoutGraph(graph: GraphResponse, options: LayoutOptions = {}): Layout {
  const columnGap = options.columnGap ?? 220;
  const rowGap = options.rowGap ?? 90;
  const margin = options.margin ?? 60;

  const byDepth = new Map<number, GraphNode[]>();
  for (const node of graph.nodes) {
    const bucket = byDepth.get(node.depth);
    if (bucket) {
      bucket.push(node);
    } else {
      byDepth.set(node.depth, [node]);
    }
  }

  const placed = new Map<string, PlacedNode>();
  let maxRows = 1;
  for (const [depth, bucket] of byDepth) {
    bucket.sort((a, b) => (a.resource < b.resource ? -1 : a.resource > b.resource ? 1 : 0));
    maxRows = Math.max(maxRows, bucket.length);
    bucket.forEach((node, row) => {
      placed.set(node.resource, {
        ...node,
        x: margin + depth * columnGap,
        y: margin + row * rowGap,
      });
    });
  }

  const edges: PlacedEdge[] = [];
  for (const edge of graph.edges) {
    const source = placed.get(edge.from);
    const target = placed.get(edge.to);
    if (!source || !target) {
      continue; // server guarantees closure, but stay defensive
    }
    edges.push({ ...edge, x1: source.x, y1: source.y, x2: target.x, y2: target.y });
  }

  const depths = [...byDepth.keys()];
  const maxDepth = depths.length > 0 ? Math.max(...depths) : 0;
  return {
    nodes: [...placed.values()],
    edges,
    width: margin * 2 + maxDepth * columnGap,
    height: margin * 2 + (maxRows - 1) * rowGap,
  };
}

/** Keep only edges whose relation is enabled (the inferred umbrella
 * relation subsumes its sub-relations when toggled on). */
export function filterEdges(
  edges: GraphEdge[],
  enabled: ReadonlySet<string>,
  subsumed: Record<string, string[]> = {},
): GraphEdge[] {
  const expanded = new Set(enabled);
  for (const name of enabled) {
    for (const sub of subsumed[name] ?? []) {
      expanded.add(sub);
    }
  }
  return edges.filter((edge) => expanded.has(edge.relation));
}
