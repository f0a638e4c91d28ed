import { ApiClient } from "./api.js";
import { mountApp } from "./ui.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

mountApp(root, new ApiClient("")).catch((err) => {
  root.textContent = `failed to start: ${err instanceof Error ? err.message : err}`;
});
