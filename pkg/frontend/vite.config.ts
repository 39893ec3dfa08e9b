import { defineConfig } from 'vite'

export default defineConfig({
  server: {
    proxy: {
      // Dev server forwards compute calls to `tetraproj serve`.
      '/api': 'http://127.0.0.1:8099',
    },
  },
  build: {
    outDir: 'dist',
    sourcemap: true,
  },
  test: {
    environment: 'node',
  },
})
