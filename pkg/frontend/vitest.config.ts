import { defineConfig } from "vitest/config";

export default defineConfig({
  resolve: {
    // src modules import each other with explicit .js extensions (native
    // browser ESM); map them back to the .ts sources for the test runner
    alias: [{ find: /^(\.{1,2}\/.*)\.js$/, replacement: "$1" }],
  },
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
