import { spawn, type ChildProcess } from "node:child_process";
import { mkdtemp, readFile, rm, writeFile } from "node:fs/promises";
import net from "node:net";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

declare module "vitest" {
  interface ProvidedContext {
    /** Service on an untouched snapshot copy; tests must not mutate it. */
    apiBaseUrl: string;
    /** Service on the editing snapshot; commit tests write here. */
    editorBaseUrl: string;
  }
}

const HERE = dirname(fileURLToPath(import.meta.url));
const REPO_ROOT = resolve(HERE, "..", "..", "..");
const FIXTURE = join(REPO_ROOT, "tests", "data", "snapshot.jsonl");

interface Service {
  child: ChildProcess;
  url: string;
}

interface PartEntry {
  qid: string;
  fragment: string;
}

function sleep(ms: number): Promise<void> {
  return new Promise((done) => {
    setTimeout(done, ms);
  });
}

function freePort(): Promise<number> {
  return new Promise((done, fail) => {
    const probe = net.createServer();
    probe.once("error", fail);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        fail(new Error("could not allocate a port"));
        return;
      }
      const port = address.port;
      probe.close(() => done(port));
    });
  });
}

async function prepareSnapshots(
  dir: string
): Promise<{ pristine: string; editable: string }> {
  const source = await readFile(FIXTURE, "utf-8");
  const pristine = join(dir, "snapshot-api.jsonl");
  await writeFile(pristine, source);

  // The stock snapshot already records the c annotation on the
  // mass-energy item, so committing the top c suggestion there would
  // only ever hit the duplicate guard. The editing copy moves that
  // annotation to the wavelength item: the c suggestion counts and
  // their ordering stay the same, while the mass-energy item is free
  // to gain the row.
  const items = source
    .split("\n")
    .filter((line) => line.trim() !== "")
    .map((line) => JSON.parse(line) as { qid: string; parts: PartEntry[] });
  for (const item of items) {
    if (item.qid === "Q35875") {
      item.parts = item.parts.filter(
        (part) => !(part.fragment === "c" && part.qid === "Q2111")
      );
    }
    if (item.qid === "Q170475") {
      item.parts = [...item.parts, { qid: "Q2111", fragment: "c" }];
    }
  }
  const editable = join(dir, "snapshot-editor.jsonl");
  await writeFile(
    editable,
    items.map((item) => JSON.stringify(item)).join("\n") + "\n"
  );
  return { pristine, editable };
}

async function startService(snapshotPath: string): Promise<Service> {
  const port = await freePort();
  const child = spawn(
    "python3",
    ["-m", "mathwikibase", "serve", "--snapshot", snapshotPath, "--port", String(port)],
    { stdio: ["ignore", "ignore", "pipe"] }
  );
  const stderrChunks: string[] = [];
  child.stderr?.on("data", (chunk: Buffer) => {
    stderrChunks.push(String(chunk));
  });
  const url = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 60_000;
  for (;;) {
    if (child.exitCode !== null) {
      throw new Error(`service exited early:\n${stderrChunks.join("")}`);
    }
    try {
      const response = await fetch(`${url}/v1/health`);
      if (response.ok) {
        return { child, url };
      }
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      child.kill("SIGKILL");
      throw new Error(`service did not come up:\n${stderrChunks.join("")}`);
    }
    await sleep(100);
  }
}

function stopService(service: Service): Promise<void> {
  return new Promise((done) => {
    if (service.child.exitCode !== null) {
      done();
      return;
    }
    service.child.once("exit", () => done());
    service.child.kill("SIGTERM");
    setTimeout(() => {
      service.child.kill("SIGKILL");
    }, 5_000).unref();
  });
}

export default async function setup(context: {
  provide: (key: "apiBaseUrl" | "editorBaseUrl", value: string) => void;
}): Promise<() => Promise<void>> {
  const dir = await mkdtemp(join(tmpdir(), "mathwb-editor-"));
  const { pristine, editable } = await prepareSnapshots(dir);
  const api = await startService(pristine);
  const editor = await startService(editable);
  context.provide("apiBaseUrl", api.url);
  context.provide("editorBaseUrl", editor.url);
  return async () => {
    await Promise.all([stopService(api), stopService(editor)]);
    await rm(dir, { recursive: true, force: true });
  };
}
