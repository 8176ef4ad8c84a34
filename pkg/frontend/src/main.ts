import { App } from "./app.js";

const root = document.getElementById("citetree-root");
if (root) {
  new App(root);
}
