import type { NetworkPayload } from "./types.js";

/** Node fill is a pure function of the payload level: advisees one level
 * down are green, two levels down blue, advisors shades of purple. */
export const LEVEL_COLORS: Record<number, string> = {
  [-2]: "#5e35b1",
  [-1]: "#8e24aa",
  0: "#f9a825",
  1: "#2e7d32",
  2: "#1565c0",
};

/** Layout rows from top to bottom: grand-advisors, advisors, owner,
 * advisees, their advisees. */
const LEVEL_ORDER = [-2, -1, 0, 1, 2];

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 860;
const ROW_HEIGHT = 88;
const MARGIN_Y = 56;

/** Shape-check a network payload; anything off raises instead of
 * rendering garbage, so the app can show its error pane. */
export function validateNetworkPayload(data: unknown): NetworkPayload {
  if (typeof data !== "object" || data === null) {
    throw new Error("network payload is not an object");
  }
  const payload = data as Partial<NetworkPayload>;
  if (!Array.isArray(payload.nodes) || !Array.isArray(payload.edges)) {
    throw new Error("network payload needs 'nodes' and 'edges' arrays");
  }
  const ids = new Set<string>();
  for (const node of payload.nodes) {
    if (
      typeof node !== "object" ||
      node === null ||
      typeof node.id !== "string" ||
      typeof node.label !== "string" ||
      typeof node.level !== "number" ||
      !Number.isInteger(node.level) ||
      node.level < -2 ||
      node.level > 2
    ) {
      throw new Error("malformed network node");
    }
    if (ids.has(node.id)) {
      throw new Error(`duplicate node id ${node.id}`);
    }
    ids.add(node.id);
  }
  for (const edge of payload.edges) {
    if (
      typeof edge !== "object" ||
      edge === null ||
      typeof edge.from !== "string" ||
      typeof edge.to !== "string" ||
      !ids.has(edge.from) ||
      !ids.has(edge.to)
    ) {
      throw new Error("malformed network edge");
    }
  }
  return payload as NetworkPayload;
}

function levelY(level: number): number {
  return MARGIN_Y + LEVEL_ORDER.indexOf(level) * ROW_HEIGHT;
}

/** Render the node-link view as layered SVG rows. Clicking any node
 * re-roots the exploration on that author via `onSelect`. */
export function renderNetwork(
  container: HTMLElement,
  payload: NetworkPayload,
  onSelect: (authorId: string) => void,
): void {
  container.replaceChildren();
  const svg = document.createElementNS(SVG_NS, "svg");
  const height = MARGIN_Y + LEVEL_ORDER.length * ROW_HEIGHT;
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${height}`);
  svg.setAttribute("class", "network-canvas");

  const positions = new Map<string, { x: number; y: number }>();
  for (const level of LEVEL_ORDER) {
    const row = payload.nodes.filter((node) => node.level === level);
    row.forEach((node, index) => {
      positions.set(node.id, {
        x: (WIDTH * (index + 1)) / (row.length + 1),
        y: levelY(level),
      });
    });
  }

  for (const edge of payload.edges) {
    const from = positions.get(edge.from)!;
    const to = positions.get(edge.to)!;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y));
    line.setAttribute("class", "network-edge");
    line.setAttribute("stroke", "#90a4ae");
    svg.appendChild(line);
  }

  for (const node of payload.nodes) {
    const { x, y } = positions.get(node.id)!;
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute(
      "class",
      node.level === 0 ? "network-node owner" : "network-node",
    );
    group.setAttribute("data-author-id", node.id);
    group.setAttribute("data-level", String(node.level));
    group.addEventListener("click", () => onSelect(node.id));

    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(x));
    circle.setAttribute("cy", String(y));
    circle.setAttribute("r", node.level === 0 ? "20" : "16");
    circle.setAttribute("fill", LEVEL_COLORS[node.level]);
    if (node.level === 0) {
      circle.setAttribute("stroke", "#37474f");
      circle.setAttribute("stroke-width", "3");
    }
    group.appendChild(circle);

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(x));
    text.setAttribute("y", String(y + 36));
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("class", "network-label");
    text.textContent = node.label;
    group.appendChild(text);

    svg.appendChild(group);
  }

  container.appendChild(svg);
}
