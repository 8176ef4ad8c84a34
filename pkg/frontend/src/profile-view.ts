import type { AuthorProfile } from "./types.js";

export function renderProfile(container: HTMLElement, profile: AuthorProfile): void {
  container.replaceChildren();
  const panel = document.createElement("div");
  panel.className = "profile-panel";

  const heading = document.createElement("h2");
  heading.textContent = profile.name;
  panel.appendChild(heading);

  const rows: Array<[string, string, string]> = [
    ["thesis", "thesis", profile.thesis],
    ["institute", "institute", profile.institute],
    ["country", "country", profile.country],
    ["domain", "domain", profile.domain],
    ["total citations", "total_citations", String(profile.total_citations)],
    ["year", "year", profile.year === null ? "" : String(profile.year)],
  ];
  const list = document.createElement("dl");
  list.className = "metric-list";
  for (const [label, field, value] of rows) {
    const term = document.createElement("dt");
    term.textContent = label;
    const detail = document.createElement("dd");
    detail.setAttribute("data-field", field);
    detail.textContent = value;
    list.append(term, detail);
  }
  panel.appendChild(list);
  container.appendChild(panel);
}
