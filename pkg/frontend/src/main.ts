import { ApiClient } from "./api.js";
import { Editor } from "./editor.js";

const DEFAULT_BASE_URL = "http://127.0.0.1:8080";

function start(): void {
  const root = document.getElementById("editor");
  if (root === null) {
    return;
  }
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("api") ?? DEFAULT_BASE_URL;
  const lang = params.get("lang") ?? undefined;
  const editor = new Editor(new ApiClient(baseUrl), root, lang);

  const form = document.getElementById("load-form");
  const input = document.getElementById("qid-input") as HTMLInputElement | null;
  if (form !== null && input !== null) {
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const qid = input.value.trim();
      if (qid !== "") {
        void editor.load(qid);
      }
    });
  }

  const initialQid = params.get("qid");
  if (initialQid !== null) {
    if (input !== null) {
      input.value = initialQid;
    }
    void editor.load(initialQid);
  }
}

start();
