import { ApiClient } from "./api.js";
import { Controller } from "./controller.js";
import { el, mount } from "./vdom.js";

/** Browser bootstrap: pick a dataset, create a session, run the workbench. */
async function boot(): Promise<void> {
  const rootEl = document.getElementById("app");
  if (rootEl === null) throw new Error("missing #app element");
  const api = new ApiClient("");
  const controller = new Controller(api);

  const draw = () => {
    rootEl.replaceChildren(mount(controller.render(), document));
  };
  controller.onRender = draw;

  // every gesture redraws once the round trip settles
  const rawDispatch = controller.dispatch.bind(controller);
  controller.dispatch = async (g) => {
    const ok = await rawDispatch(g);
    draw();
    return ok;
  };

  async function start(dataset: string): Promise<void> {
    const created = await api.createSession({ dataset });
    await controller.attach(created.session_id, created.history_length);
    draw();
  }

  const { datasets } = await api.listDatasets();
  const picker = el("div", { class: "session-picker" }, [
    el("h2", {}, ["start a session"]),
    el(
      "ul",
      { class: "dataset-list" },
      datasets.map((name) =>
        el("li", {}, [
          el("button", { class: "dataset-pick" }, [name], {
            click: () => void start(name),
          }),
        ]),
      ),
    ),
  ]);
  rootEl.replaceChildren(mount(picker, document));
}

void boot();
