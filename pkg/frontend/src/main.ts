import { ConsultationController } from "./consultation.js";
import { WorksheetController } from "./worksheet.js";

const DEFAULT_KB = "diffeq";

function boot(): void {
    const app = document.getElementById("app");
    if (!app) return;
    const tabs = {
        consult: document.getElementById("tab-consult"),
        worksheet: document.getElementById("tab-worksheet"),
    };

    const showConsultation = () => {
        app.textContent = "";
        const pane = document.createElement("div");
        app.appendChild(pane);
        const params = new URLSearchParams(window.location.search);
        void new ConsultationController(pane, params.get("kb") ?? DEFAULT_KB).run();
    };
    const showWorksheet = () => {
        app.textContent = "";
        const pane = document.createElement("div");
        app.appendChild(pane);
        void new WorksheetController(pane).run();
    };

    tabs.consult?.addEventListener("click", showConsultation);
    tabs.worksheet?.addEventListener("click", showWorksheet);
    showConsultation();
}

document.addEventListener("DOMContentLoaded", boot);
