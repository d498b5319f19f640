import { EditorApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  void new EditorApp(root).init();
}
