import type { Selection } from "./fragments.js";
import type { AstPayload, PageModel, SuggestionRow } from "./types.js";

export interface PendingCommit {
  fragment: string;
  partQid: string;
}

export interface Notice {
  kind: "info" | "error";
  text: string;
}

export interface EditorState {
  qid: string | null;
  page: PageModel | null;
  ast: AstPayload | null;
  selection: Selection | null;
  /** Fragment the current suggestion list answers. */
  suggestionsFor: string | null;
  suggestions: SuggestionRow[];
  /** True while the fetch for the current selection is in flight. */
  suggestionsPending: boolean;
  /** Serial of the newest suggestion request; older responses are stale. */
  fetchSeq: number;
  pendingCommit: PendingCommit | null;
  annotationEnabled: boolean;
  notices: Notice[];
}

export type EditorEvent =
  | { type: "load_started"; qid: string }
  | { type: "formula_loaded"; page: PageModel; ast: AstPayload }
  | { type: "load_failed"; code: string }
  | { type: "selection_set"; selection: Selection; fragment: string; seq: number }
  | { type: "selection_cleared" }
  | { type: "suggestions_loaded"; seq: number; rows: SuggestionRow[] }
  | { type: "suggestions_failed"; seq: number }
  | { type: "commit_started"; fragment: string; partQid: string }
  | { type: "commit_succeeded"; page: PageModel }
  | { type: "commit_duplicate" }
  | { type: "commit_failed" };

export function initialState(): EditorState {
  return {
    qid: null,
    page: null,
    ast: null,
    selection: null,
    suggestionsFor: null,
    suggestions: [],
    suggestionsPending: false,
    fetchSeq: 0,
    pendingCommit: null,
    annotationEnabled: false,
    notices: [],
  };
}

const LOAD_FAILURE_TEXT: Record<string, string> = {
  unknown_qid: "item not found",
  invalid_qid: "not a valid item id",
  no_defining_formula: "item has no defining formula; annotation disabled",
};

/**
 * Pure transition function. Every editor state is reproducible by
 * replaying the event list against the initial state; fetches happen
 * outside and only their outcomes enter as events.
 */
export function reduce(state: EditorState, event: EditorEvent): EditorState {
  switch (event.type) {
    case "load_started":
      return { ...initialState(), qid: event.qid };
    case "formula_loaded":
      return {
        ...state,
        page: event.page,
        ast: event.ast,
        selection: null,
        suggestionsFor: null,
        suggestions: [],
        pendingCommit: null,
        annotationEnabled: true,
      };
    case "load_failed":
      return {
        ...state,
        page: null,
        ast: null,
        selection: null,
        suggestionsFor: null,
        suggestions: [],
        annotationEnabled: false,
        notices: [
          ...state.notices,
          {
            kind: "error",
            text: LOAD_FAILURE_TEXT[event.code] ?? `load failed (${event.code})`,
          },
        ],
      };
    case "selection_set":
      // suggestions always describe the current selection, so changing
      // the selection empties them until the new fetch lands
      return {
        ...state,
        selection: event.selection,
        suggestionsFor: event.fragment,
        suggestions: [],
        suggestionsPending: true,
        fetchSeq: event.seq,
      };
    case "selection_cleared":
      return {
        ...state,
        selection: null,
        suggestionsFor: null,
        suggestions: [],
        suggestionsPending: false,
        fetchSeq: state.fetchSeq + 1,
      };
    case "suggestions_loaded":
      if (event.seq !== state.fetchSeq) {
        return state;
      }
      return { ...state, suggestions: event.rows, suggestionsPending: false };
    case "suggestions_failed":
      if (event.seq !== state.fetchSeq) {
        return state;
      }
      return {
        ...state,
        suggestions: [],
        suggestionsPending: false,
        notices: [
          ...state.notices,
          { kind: "error", text: "could not fetch suggestions" },
        ],
      };
    case "commit_started":
      return {
        ...state,
        pendingCommit: { fragment: event.fragment, partQid: event.partQid },
      };
    case "commit_succeeded":
      return {
        ...state,
        page: event.page,
        pendingCommit: null,
        notices: [...state.notices, { kind: "info", text: "annotation saved" }],
      };
    case "commit_duplicate":
      return {
        ...state,
        pendingCommit: null,
        notices: [
          ...state.notices,
          { kind: "info", text: "already annotated" },
        ],
      };
    case "commit_failed":
      // keep pendingCommit so the user can retry once the service is back
      return {
        ...state,
        notices: [
          ...state.notices,
          { kind: "error", text: "commit failed; use retry to try again" },
        ],
      };
  }
}
