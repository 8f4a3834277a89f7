import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    globalSetup: "./tests/setup/global.ts",
    // Two test files share live service processes; keep them sequential
    // so commits made by one file cannot race reads in another.
    fileParallelism: false,
    testTimeout: 30000,
    hookTimeout: 120000,
  },
});
