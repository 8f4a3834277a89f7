/**
 * Wire types for the formula service's JSON API.
 *
 * These mirror the shapes the service emits; the editor never invents
 * fields of its own on top of them.
 */

export interface MatchPosition {
  path: number[];
  length: number;
}

export interface ArticleLink {
  url_path: string;
  via: "direct" | "subclass";
}

export interface PartRow {
  part_qid: string;
  fragment_tex: string;
  fragment_mathml: string;
  label: string | null;
  description: string | null;
  article: ArticleLink | null;
  matches: MatchPosition[];
}

export interface PageModel {
  qid: string;
  lang: string;
  formula_tex: string;
  formula_mathml: string;
  formula_alt_text: string;
  label: string;
  label_lang: string;
  description: string | null;
  description_lang: string | null;
  type_label: string | null;
  parts: PartRow[];
}

export type NodeKind =
  | "row"
  | "identifier"
  | "number"
  | "operator"
  | "fraction"
  | "sqrt"
  | "script"
  | "text";

/** One node of the server-rendered syntax tree. */
export interface AstNode {
  /** Canonical serialization of this subtree, usable as a fragment. */
  tex: string;
  kind: NodeKind;
  name?: string;
  variant?: string;
  literal?: string;
  symbol?: string;
  has_sub?: boolean;
  has_sup?: boolean;
  content?: string;
  children?: AstNode[];
}

export interface AstPayload {
  tex: string;
  canonical_tex: string;
  hash: string;
  root: AstNode;
}

export interface SuggestionRow {
  qid: string;
  score: number;
  basis: "exact" | "label" | "both";
  label: string | null;
}

export interface PartEntry {
  qid: string;
  fragment: string;
}

export interface HealthStatus {
  status: string;
  items: number;
}
