import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    proxy: {
      // the API service; see lexrag `serve`
      "/ask": "http://127.0.0.1:8765",
      "/library": "http://127.0.0.1:8765",
      "/briefcase": "http://127.0.0.1:8765",
      "/feedback": "http://127.0.0.1:8765",
      "/stats": "http://127.0.0.1:8765",
    },
  },
  test: {
    environment: "jsdom",
  },
});
