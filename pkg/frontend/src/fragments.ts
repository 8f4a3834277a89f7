import type { AstNode, MatchPosition } from "./types.js";

/**
 * A selection addresses either one node of the tree or a contiguous run
 * of children of one row. Paths are child-index lists from the root,
 * matching the match positions the service reports.
 */
export type Selection =
  | { kind: "node"; path: number[] }
  | { kind: "run"; rowPath: number[]; start: number; length: number };

export function nodeAt(root: AstNode, path: number[]): AstNode | null {
  let node: AstNode = root;
  for (const index of path) {
    const children = node.children;
    if (!children || index < 0 || index >= children.length) {
      return null;
    }
    node = children[index];
  }
  return node;
}

/**
 * The TeX fragment a selection stands for, or null if the selection does
 * not address valid nodes.
 *
 * Fragments are taken verbatim from the server-provided tree. A run's
 * fragment is the joined tex of the covered children; row serialization
 * is plain concatenation, so the join is itself the canonical form.
 */
export function fragmentFor(root: AstNode, selection: Selection): string | null {
  if (selection.kind === "node") {
    const node = nodeAt(root, selection.path);
    return node === null ? null : node.tex;
  }
  const row = nodeAt(root, selection.rowPath);
  if (row === null || row.kind !== "row" || !row.children) {
    return null;
  }
  const { start, length } = selection;
  if (start < 0 || length < 1 || start + length > row.children.length) {
    return null;
  }
  return row.children
    .slice(start, start + length)
    .map((child) => child.tex)
    .join("");
}

/**
 * Combine a prior selection with a shift-click on `path` into a row run.
 *
 * Both endpoints must be children of the same row node; otherwise null,
 * and the caller falls back to a plain node selection. A collapsed run
 * of one child comes back as a node selection.
 */
export function runSelection(
  root: AstNode,
  anchor: Selection,
  path: number[]
): Selection | null {
  let rowPath: number[];
  let low: number;
  let high: number;
  if (anchor.kind === "node") {
    if (anchor.path.length === 0) {
      return null;
    }
    rowPath = anchor.path.slice(0, -1);
    low = high = anchor.path[anchor.path.length - 1];
  } else {
    rowPath = anchor.rowPath;
    low = anchor.start;
    high = anchor.start + anchor.length - 1;
  }
  if (path.length !== rowPath.length + 1) {
    return null;
  }
  if (!pathsEqual(path.slice(0, -1), rowPath)) {
    return null;
  }
  const row = nodeAt(root, rowPath);
  if (row === null || row.kind !== "row" || !row.children) {
    return null;
  }
  const index = path[path.length - 1];
  if (index < 0 || index >= row.children.length) {
    return null;
  }
  const start = Math.min(low, index);
  const end = Math.max(high, index);
  if (start === end) {
    return { kind: "node", path: [...rowPath, start] };
  }
  return { kind: "run", rowPath, start, length: end - start + 1 };
}

export function pathsEqual(a: number[], b: number[]): boolean {
  return a.length === b.length && a.every((value, i) => value === b[i]);
}

/** Stable key for a path, used for DOM attributes and set membership. */
export function pathKey(path: number[]): string {
  return path.join(".");
}

export function parsePath(key: string): number[] {
  if (key === "") {
    return [];
  }
  return key.split(".").map((part) => Number(part));
}

/**
 * Paths of the nodes a set of match positions covers. A run position
 * addresses its row children individually so each gets its own mark.
 */
export function coveredPaths(matches: MatchPosition[]): Set<string> {
  const keys = new Set<string>();
  for (const match of matches) {
    if (match.length <= 1) {
      keys.add(pathKey(match.path));
      continue;
    }
    const rowPath = match.path.slice(0, -1);
    const start = match.path[match.path.length - 1];
    for (let i = 0; i < match.length; i += 1) {
      keys.add(pathKey([...rowPath, start + i]));
    }
  }
  return keys;
}

/** Paths covered by a selection, for highlighting. */
export function selectedPaths(selection: Selection | null): Set<string> {
  if (selection === null) {
    return new Set();
  }
  if (selection.kind === "node") {
    return new Set([pathKey(selection.path)]);
  }
  const keys = new Set<string>();
  for (let i = 0; i < selection.length; i += 1) {
    keys.add(pathKey([...selection.rowPath, selection.start + i]));
  }
  return keys;
}
