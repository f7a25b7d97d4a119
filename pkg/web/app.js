// Query box + ranked result list for the niftyweb server.
// Everything testable is a plain exported function; the DOM wiring at the
// bottom only runs in a browser.  Compiled as one ES module (web/app.js).
export const DEBOUNCE_MS = 150;
export const MAX_RESULTS = 5;
export function formatWeight(weight) {
    if (weight === 0)
        return "";
    return String(weight).replace(/\B(?=(\d{3})+(?!\d))/g, ",");
}
export function rowsFromPage(page) {
    return page.results.map((r) => ({
        weightText: formatWeight(r.weight),
        label: r.label,
        href: r.link ?? null,
    }));
}
export function debounce(fn, delayMs) {
    let timer = null;
    const debounced = (...args) => {
        if (timer !== null)
            clearTimeout(timer);
        timer = setTimeout(() => {
            timer = null;
            fn(...args);
        }, delayMs);
    };
    debounced.cancel = () => {
        if (timer !== null)
            clearTimeout(timer);
        timer = null;
    };
    return debounced;
}
// Monotonic request tags: a response may render only if its tag is >= every
// tag issued so far, so a slow old response never overwrites a newer one.
export function createRequestGate() {
    let newest = 0;
    return {
        issue() {
            return ++newest;
        },
        mayRender(tag) {
            return tag >= newest;
        },
    };
}
export function createApp(transport, view, debounceMs = DEBOUNCE_MS, maxResults = MAX_RESULTS) {
    const gate = createRequestGate();
    const fire = (query) => {
        const tag = gate.issue();
        transport(query, maxResults).then((page) => {
            if (gate.mayRender(tag))
                view.showRows(rowsFromPage(page));
        }, (err) => {
            // keep the last successful list; just surface the banner
            if (gate.mayRender(tag))
                view.showError(String(err));
        });
    };
    const scheduled = debounce(fire, debounceMs);
    return {
        onInput(text) {
            const query = text.trim();
            if (query === "") {
                scheduled.cancel(); // no request at all for an empty box
                gate.issue(); // outstanding responses are now stale
                view.showRows([]);
                return;
            }
            scheduled(query);
        },
    };
}
export function fetchTransport(baseUrl = "") {
    return async (query, max) => {
        const url = `${baseUrl}/query?q=${encodeURIComponent(query)}&max=${max}`;
        const response = await fetch(url);
        if (!response.ok)
            throw new Error(`HTTP ${response.status}`);
        return (await response.json());
    };
}
function mountBrowserApp() {
    const input = document.getElementById("query");
    const list = document.getElementById("results");
    const banner = document.getElementById("error");
    if (!input || !list || !banner)
        return;
    const view = {
        showRows(rows) {
            banner.hidden = true;
            const fresh = rows.map((row) => {
                const item = document.createElement("li");
                if (row.weightText) {
                    const weight = document.createElement("span");
                    weight.className = "weight";
                    weight.textContent = row.weightText;
                    item.appendChild(weight);
                }
                if (row.href) {
                    const anchor = document.createElement("a");
                    anchor.href = row.href;
                    anchor.target = "_blank";
                    anchor.rel = "noopener";
                    anchor.textContent = row.label;
                    item.appendChild(anchor);
                }
                else {
                    const label = document.createElement("span");
                    label.textContent = row.label;
                    item.appendChild(label);
                }
                return item;
            });
            list.replaceChildren(...fresh);
        },
        showError(message) {
            banner.textContent = message;
            banner.hidden = false;
        },
    };
    const app = createApp(fetchTransport(), view);
    input.addEventListener("input", () => app.onInput(input.value));
}
if (typeof document !== "undefined" && document.getElementById("query")) {
    mountBrowserApp();
}
else if (typeof document !== "undefined") {
    document.addEventListener("DOMContentLoaded", mountBrowserApp);
}
