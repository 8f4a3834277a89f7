import { ApiClient, ApiRequestError } from "./api.js";
import {
  fragmentFor,
  parsePath,
  runSelection,
  type Selection,
} from "./fragments.js";
import {
  initialState,
  reduce,
  type EditorEvent,
  type EditorState,
} from "./state.js";
import { renderEditor } from "./view.js";

/**
 * Binds the reducer, the API client, and the view to one DOM element.
 *
 * All state lives in the reducer; the editor only starts fetches and
 * feeds their outcomes back as events, then re-renders.
 */
export class Editor {
  private state: EditorState;
  private seq = 0;
  private readonly inFlight = new Set<Promise<void>>();

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
    private readonly lang?: string
  ) {
    this.state = initialState();
    this.root.addEventListener("click", (event) => {
      this.onClick(event as MouseEvent);
    });
    this.render();
  }

  getState(): EditorState {
    return this.state;
  }

  /** Resolves once every operation started so far has settled. */
  async idle(): Promise<void> {
    while (this.inFlight.size > 0) {
      await Promise.all([...this.inFlight]);
    }
  }

  load(qid: string): Promise<void> {
    return this.track(this.doLoad(qid));
  }

  select(selection: Selection): Promise<void> {
    return this.track(this.doSelect(selection));
  }

  acceptSuggestion(index: number): Promise<void> {
    return this.track(this.doAcceptSuggestion(index));
  }

  commit(fragment: string, partQid: string): Promise<void> {
    return this.track(this.doCommit(fragment, partQid));
  }

  retryCommit(): Promise<void> {
    return this.track(this.doRetryCommit());
  }

  private async doLoad(qid: string): Promise<void> {
    this.dispatch({ type: "load_started", qid });
    try {
      const page = await this.api.fetchPage(qid, this.lang);
      const ast = await this.api.fetchAst(page.formula_tex);
      this.dispatch({ type: "formula_loaded", page, ast });
    } catch (error) {
      this.dispatch({ type: "load_failed", code: errorCode(error) });
    }
  }

  private async doSelect(selection: Selection): Promise<void> {
    const ast = this.state.ast;
    if (ast === null) {
      return;
    }
    const fragment = fragmentFor(ast.root, selection);
    if (fragment === null) {
      this.clearSelection();
      return;
    }
    const seq = ++this.seq;
    this.dispatch({ type: "selection_set", selection, fragment, seq });
    try {
      const rows = await this.api.fetchSuggestions(fragment, {
        lang: this.lang,
      });
      this.dispatch({ type: "suggestions_loaded", seq, rows });
    } catch {
      this.dispatch({ type: "suggestions_failed", seq });
    }
  }

  clearSelection(): void {
    if (this.state.selection !== null) {
      this.dispatch({ type: "selection_cleared" });
    }
  }

  /** Commit the part the indexed suggestion proposes for the selection. */
  private async doAcceptSuggestion(index: number): Promise<void> {
    const row = this.state.suggestions[index];
    const fragment = this.state.suggestionsFor;
    if (!row || fragment === null || !this.state.annotationEnabled) {
      return;
    }
    await this.doCommit(fragment, row.qid);
  }

  private async doCommit(fragment: string, partQid: string): Promise<void> {
    const qid = this.state.qid;
    if (qid === null) {
      return;
    }
    this.dispatch({ type: "commit_started", fragment, partQid });
    try {
      await this.api.commitPart(qid, fragment, partQid);
      // re-fetch so the new row and its highlight come from the service,
      // not from local guesswork
      const page = await this.api.fetchPage(qid, this.lang);
      this.dispatch({ type: "commit_succeeded", page });
    } catch (error) {
      if (error instanceof ApiRequestError && error.code === "duplicate_part") {
        this.dispatch({ type: "commit_duplicate" });
      } else {
        this.dispatch({ type: "commit_failed" });
      }
    }
  }

  private async doRetryCommit(): Promise<void> {
    const pending = this.state.pendingCommit;
    if (pending !== null) {
      await this.doCommit(pending.fragment, pending.partQid);
    }
  }

  private dispatch(event: EditorEvent): void {
    this.state = reduce(this.state, event);
    this.render();
  }

  private render(): void {
    this.root.innerHTML = renderEditor(this.state);
  }

  private track(task: Promise<void>): Promise<void> {
    const wrapped = task.finally(() => {
      this.inFlight.delete(wrapped);
    });
    this.inFlight.add(wrapped);
    return wrapped;
  }

  private onClick(event: MouseEvent): void {
    const target = event.target instanceof Element ? event.target : null;
    if (target === null) {
      return;
    }
    const suggestion = target.closest("li.suggestion");
    if (suggestion !== null) {
      const index = Number(suggestion.getAttribute("data-index"));
      if (Number.isInteger(index)) {
        void this.acceptSuggestion(index);
      }
      return;
    }
    const action = target.closest("[data-action]");
    if (action !== null && action.getAttribute("data-action") === "retry") {
      void this.retryCommit();
      return;
    }
    const nodeElement = target.closest("[data-path]");
    if (nodeElement !== null) {
      const path = parsePath(nodeElement.getAttribute("data-path") ?? "");
      if (event.shiftKey) {
        void this.track(this.extendSelection(path));
      } else {
        void this.select({ kind: "node", path });
      }
      return;
    }
    // a click in the formula area that hits no node drops the selection
    if (target.closest(".mwb-formula") !== null) {
      this.clearSelection();
    }
  }

  private async extendSelection(path: number[]): Promise<void> {
    const ast = this.state.ast;
    const anchor = this.state.selection;
    const run =
      ast !== null && anchor !== null
        ? runSelection(ast.root, anchor, path)
        : null;
    await this.select(run ?? { kind: "node", path });
  }
}

function errorCode(error: unknown): string {
  if (error instanceof ApiRequestError) {
    return error.code;
  }
  return "network_error";
}
