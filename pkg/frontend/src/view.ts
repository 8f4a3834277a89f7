import {
  coveredPaths,
  pathKey,
  selectedPaths,
} from "./fragments.js";
import type { EditorState } from "./state.js";
import type { AstNode, PageModel } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/**
 * Render one tree node as nested spans. Every node carries its path in
 * data-path so clicks map straight back to tree positions.
 */
export function renderNode(
  node: AstNode,
  path: number[],
  annotated: Set<string>,
  selected: Set<string>
): string {
  const key = pathKey(path);
  const classes = ["node", `kind-${node.kind}`];
  if (node.kind === "identifier" && node.variant && node.variant !== "plain") {
    classes.push(`variant-${node.variant}`);
  }
  if (annotated.has(key)) {
    classes.push("annotated");
  }
  if (selected.has(key)) {
    classes.push("selected");
  }
  const open = `<span class="${classes.join(" ")}" data-path="${key}">`;
  const child = (index: number): string =>
    renderNode((node.children as AstNode[])[index], [...path, index], annotated, selected);
  let body: string;
  switch (node.kind) {
    case "identifier":
      body = escapeHtml(node.name ?? node.tex);
      break;
    case "number":
      body = escapeHtml(node.literal ?? node.tex);
      break;
    case "operator":
      body = escapeHtml(node.symbol ?? node.tex);
      break;
    case "text":
      body = escapeHtml(node.content ?? "");
      break;
    case "row":
      body = (node.children ?? [])
        .map((_, index) => child(index))
        .join("");
      break;
    case "fraction":
      body = `${child(0)}<span class="affix">/</span>${child(1)}`;
      break;
    case "sqrt":
      body = `<span class="affix">√</span>${child(0)}`;
      break;
    case "script": {
      const pieces = [child(0)];
      let next = 1;
      if (node.has_sub) {
        pieces.push(`<span class="affix">_</span>`, child(next));
        next += 1;
      }
      if (node.has_sup) {
        pieces.push(`<span class="affix">^</span>`, child(next));
      }
      body = pieces.join("");
      break;
    }
  }
  return `${open}${body}</span>`;
}

function renderFormulaSection(state: EditorState): string {
  if (state.ast === null || state.page === null) {
    return `<div class="mwb-formula"><p class="hint">No formula loaded.</p></div>`;
  }
  const annotated = coveredPaths(
    state.page.parts.flatMap((part) => part.matches)
  );
  const selected = selectedPaths(state.selection);
  const tree = renderNode(state.ast.root, [], annotated, selected);
  return (
    `<div class="mwb-formula">${tree}</div>` +
    `<p class="mwb-tex"><code>${escapeHtml(state.ast.canonical_tex)}</code></p>`
  );
}

function renderHeader(state: EditorState): string {
  if (state.page === null) {
    const qid = state.qid === null ? "" : ` ${escapeHtml(state.qid)}`;
    return `<header class="mwb-header"><h1>Formula editor${qid}</h1></header>`;
  }
  const page = state.page;
  const subtitle = [page.description, page.type_label]
    .filter((text): text is string => text !== null)
    .map((text) => `<span>${escapeHtml(text)}</span>`)
    .join(" ");
  return (
    `<header class="mwb-header">` +
    `<h1>${escapeHtml(page.label)} <small class="qid">${escapeHtml(page.qid)}</small></h1>` +
    (subtitle ? `<p class="mwb-subtitle">${subtitle}</p>` : "") +
    `</header>`
  );
}

function renderSuggestionSection(state: EditorState): string {
  if (state.page === null) {
    return "";
  }
  let body: string;
  if (state.selection === null) {
    body = `<p class="hint">Select an element of the formula to see suggestions.</p>`;
  } else if (state.suggestionsPending) {
    body = `<p class="hint">Looking for suggestions.</p>`;
  } else if (state.suggestions.length === 0) {
    body = `<p class="hint">No suggestions for this fragment.</p>`;
  } else {
    const items = state.suggestions
      .map((row, index) => {
        const label = row.label ?? row.qid;
        return (
          `<li class="suggestion" data-index="${index}" data-qid="${escapeHtml(row.qid)}">` +
          `<span class="s-label">${escapeHtml(label)}</span> ` +
          `<span class="s-qid">${escapeHtml(row.qid)}</span> ` +
          `<span class="s-score">${row.score}</span>` +
          `</li>`
        );
      })
      .join("");
    body = `<ol class="suggestion-list">${items}</ol>`;
  }
  const fragment =
    state.suggestionsFor === null
      ? ""
      : `<p class="mwb-fragment">Selected fragment: <code>${escapeHtml(state.suggestionsFor)}</code></p>`;
  return `<section class="mwb-suggestions"><h2>Suggestions</h2>${fragment}${body}</section>`;
}

export function renderParts(page: PageModel | null): string {
  if (page === null) {
    return "";
  }
  if (page.parts.length === 0) {
    return (
      `<section class="mwb-parts"><h2>Parts</h2>` +
      `<p class="hint">No part annotations yet.</p></section>`
    );
  }
  const rows = page.parts
    .map((part) => {
      const item =
        part.label === null
          ? escapeHtml(part.part_qid)
          : `${escapeHtml(part.label)} <span class="qid">${escapeHtml(part.part_qid)}</span>`;
      const article =
        part.article === null
          ? ""
          : `<a href="${escapeHtml(part.article.url_path)}">${escapeHtml(part.article.via)}</a>`;
      return (
        `<tr class="part" data-part-qid="${escapeHtml(part.part_qid)}">` +
        `<td class="part-fragment"><code>${escapeHtml(part.fragment_tex)}</code></td>` +
        `<td class="part-item">${item}</td>` +
        `<td class="part-description">${escapeHtml(part.description ?? "")}</td>` +
        `<td class="part-article">${article}</td>` +
        `<td class="part-matches">${part.matches.length}</td>` +
        `</tr>`
      );
    })
    .join("");
  return (
    `<section class="mwb-parts"><h2>Parts</h2><table>` +
    `<thead><tr><th>Fragment</th><th>Item</th><th>Description</th>` +
    `<th>Article</th><th>Matches</th></tr></thead>` +
    `<tbody>${rows}</tbody></table></section>`
  );
}

function renderPending(state: EditorState): string {
  if (state.pendingCommit === null) {
    return "";
  }
  const pending = state.pendingCommit;
  return (
    `<div class="mwb-pending">Pending: <code>${escapeHtml(pending.fragment)}</code>` +
    ` as ${escapeHtml(pending.partQid)} ` +
    `<button type="button" data-action="retry">Retry</button></div>`
  );
}

function renderNotices(state: EditorState): string {
  if (state.notices.length === 0) {
    return "";
  }
  const items = state.notices
    .map(
      (notice) =>
        `<li class="notice notice-${notice.kind}">${escapeHtml(notice.text)}</li>`
    )
    .join("");
  return `<ul class="mwb-notices">${items}</ul>`;
}

/** Full editor markup for one state; the editor swaps it in wholesale. */
export function renderEditor(state: EditorState): string {
  return (
    renderHeader(state) +
    renderNotices(state) +
    renderFormulaSection(state) +
    renderPending(state) +
    renderSuggestionSection(state) +
    renderParts(state.page)
  );
}
