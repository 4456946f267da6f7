import { ApiClient } from "./api.js";
import { AnnotatorApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? "";

const root = document.querySelector<HTMLElement>("#app");
if (!root) throw new Error("missing #app container");

const app = new AnnotatorApp(root, new ApiClient(base));
void app.start();

// handle for debugging from the console
(window as unknown as { framebench: AnnotatorApp }).framebench = app;
