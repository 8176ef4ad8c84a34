import type { CommunityReport } from "./types.js";

/** Every displayed number comes verbatim from the payload; this view
 * never recomputes a metric. */
export function renderCommunity(
  container: HTMLElement,
  report: CommunityReport,
  onSelectAuthor: (authorId: number) => void,
): void {
  container.replaceChildren();
  const panel = document.createElement("div");
  panel.className = "community-panel";

  const heading = document.createElement("h2");
  heading.textContent = report.name;
  panel.appendChild(heading);

  const badge = document.createElement("span");
  badge.className = `verdict-badge verdict-${report.verdict.toLowerCase()}`;
  badge.setAttribute("data-field", "verdict");
  badge.textContent = report.verdict;
  panel.appendChild(badge);

  if (report.ratio === null) {
    const note = document.createElement("p");
    note.className = "no-citations";
    note.textContent = "no citations";
    panel.appendChild(note);
  }

  const rows: Array<[string, string, string]> = [
    ["total citations", "total_citations", String(report.total_citations)],
    ["genealogical citations", "genealogical_citations", String(report.genealogical_citations)],
    ["non-genealogical citations", "non_genealogical", String(report.non_genealogical)],
    ["community ratio", "ratio", report.ratio === null ? "" : String(report.ratio)],
    ["lineage score", "lineage_score", String(report.lineage_score)],
    [
      "threshold band",
      "threshold",
      `${report.threshold.lower} .. ${report.threshold.upper}`,
    ],
  ];
  const table = document.createElement("dl");
  table.className = "metric-list";
  for (const [label, field, value] of rows) {
    const term = document.createElement("dt");
    term.textContent = label;
    const detail = document.createElement("dd");
    detail.setAttribute("data-field", field);
    detail.textContent = value;
    table.append(term, detail);
  }
  panel.appendChild(table);

  const partnersHeading = document.createElement("h3");
  partnersHeading.textContent = "copious partners";
  panel.appendChild(partnersHeading);
  const partners = document.createElement("div");
  partners.className = "partner-list";
  if (report.copious_partners.length === 0) {
    partners.textContent = "none";
  } else {
    for (const partner of report.copious_partners) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = "partner-link";
      button.setAttribute("data-partner-id", String(partner));
      button.textContent = `author ${partner}`;
      button.addEventListener("click", () => onSelectAuthor(partner));
      partners.appendChild(button);
    }
  }
  panel.appendChild(partners);

  const siblingHeading = document.createElement("h3");
  siblingHeading.textContent = "sibling citers";
  panel.appendChild(siblingHeading);
  const siblingEntries = Object.entries(report.sibling_citers);
  if (siblingEntries.length === 0) {
    const empty = document.createElement("p");
    empty.className = "sibling-empty";
    empty.textContent = "none";
    panel.appendChild(empty);
  } else {
    const siblingTable = document.createElement("table");
    siblingTable.className = "sibling-table";
    const head = document.createElement("tr");
    for (const column of ["sibling", "citations to this author"]) {
      const cell = document.createElement("th");
      cell.textContent = column;
      head.appendChild(cell);
    }
    siblingTable.appendChild(head);
    for (const [sibling, count] of siblingEntries) {
      const row = document.createElement("tr");
      const who = document.createElement("td");
      const link = document.createElement("button");
      link.type = "button";
      link.className = "partner-link";
      link.textContent = `author ${sibling}`;
      link.addEventListener("click", () => onSelectAuthor(Number(sibling)));
      who.appendChild(link);
      const howMany = document.createElement("td");
      howMany.textContent = String(count);
      row.append(who, howMany);
      siblingTable.appendChild(row);
    }
    panel.appendChild(siblingTable);
  }

  container.appendChild(panel);
}

/** Shown when the service has no corpus loaded (503). */
export function renderCorpusMissing(container: HTMLElement): void {
  container.replaceChildren();
  const notice = document.createElement("p");
  notice.className = "corpus-missing";
  notice.textContent = "corpus not loaded";
  container.appendChild(notice);
}
