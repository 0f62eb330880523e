import { defineConfig } from "vite";

// the API server is expected on 127.0.0.1:8000 (`chroma-infer serve`)
export default defineConfig({
  server: {
    proxy: {
      "/api": "http://127.0.0.1:8000",
    },
  },
});
