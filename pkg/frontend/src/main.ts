import { App } from "./ui";
import "./style.css";

const root = document.getElementById("app");
if (root) {
  const token = localStorage.getItem("lexrag_token") ?? "user-token";
  const app = new App(root, { baseUrl: "", token });
  void app.refreshLibrary();
}
